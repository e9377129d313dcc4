#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

/// 64-bit LCG shared with `fixtures/make_oracles.py`.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed)
    }

    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }
}

/// Problem `k` of the frozen OLS oracle: 50 x 3 features, noisy affine target.
pub fn ols_problem(k: u64) -> (DMatrix<f64>, Vec<f64>) {
    let (n, p) = (50, 3);
    let mut g = Lcg::new(1000 + k);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..p).map(|_| g.uniform(-1.0, 1.0)).collect()).collect();
    let w: Vec<f64> = (0..p).map(|_| g.uniform(-2.0, 2.0)).collect();
    let b = g.uniform(-1.0, 1.0);
    let y = rows
        .iter()
        .map(|r| {
            let clean: f64 = r.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>() + b;
            clean + 0.1 * g.uniform(-1.0, 1.0)
        })
        .collect();
    (DMatrix::from_fn(n, p, |i, j| rows[i][j]), y)
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn bundled_well() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_well.csv")
}

/// Frozen pseudo-inverse solutions: `[intercept, w0, w1, w2]` per problem.
pub fn ols_oracle() -> Vec<[f64; 4]> {
    let text = std::fs::read_to_string(fixture("ols_pinv_oracle.csv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').skip(1).map(|s| s.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect()
}

pub fn key_values(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

pub fn value_of(text: &str, key: &str) -> f64 {
    key_values(text)
        .into_iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .1
        .parse()
        .unwrap()
}

/// Quantile by explicit rank interpolation at position `q * (n - 1)`.
pub fn rank_quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = q * (v.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

/// Median of a slice.
pub fn median(values: &[f64]) -> f64 {
    rank_quantile(values, 0.5)
}

/// Every output file of a bench run, with timing columns blanked in results.
pub fn bench_files(dir: &Path) -> Vec<(String, String)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
                continue;
            }
            let name = p.strip_prefix(dir).unwrap().display().to_string();
            let mut text = fs::read_to_string(&p).unwrap();
            if name == "results.csv" {
                text = text
                    .lines()
                    .map(|l| {
                        if l.starts_with('#') {
                            return l.to_string();
                        }
                        let mut f: Vec<&str> = l.split(',').collect();
                        if f.len() >= 8 && f[0] != "model" {
                            f[5] = "";
                            f[6] = "";
                        }
                        f.join(",")
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
            }
            if name == "effective_config.txt" {
                text = text.lines().filter(|l| !l.starts_with("out=")).collect::<Vec<_>>().join("\n");
            }
            files.push((name, text));
        }
    }
    files.sort();
    files
}
