//! Gap statistics and histograms over a synthetic multi-well corpus.
//!
//!     cargo run --example gap_census

use wellgap::gaps::{detect_all, gap_histogram, stats_block, summarize_gaps, Domain, HistogramRequest, Scale};
use wellgap::synthetic::{synthetic_corpus, CorpusSpec};

fn main() -> wellgap::Result<()> {
    let (dataset, planted) = synthetic_corpus(&CorpusSpec::default(), 11)?;
    let gaps = detect_all(&dataset, 0.2)?;
    println!("{} wells, {} planted gaps, {} detected", dataset.len(), planted.len(), gaps.len());
    print!("{}", stats_block(&summarize_gaps(&gaps)?));

    for (scale, domain) in [(Scale::Log10, Domain::Full), (Scale::Linear, Domain::UpperQuartile)] {
        let h = gap_histogram(&gaps, HistogramRequest { scale, bin_count: 12, domain })?;
        println!("\n{scale:?} over {domain:?}");
        for (w, c) in h.bin_edges.windows(2).zip(&h.counts) {
            println!("{:>9.2} - {:<9.2} {}", w[0], w[1], "#".repeat(*c));
        }
    }
    Ok(())
}
