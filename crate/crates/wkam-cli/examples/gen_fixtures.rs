//! Regenerates the sample curve files under a target directory:
//! `cargo run -p wkam-cli --example gen_fixtures -- configs/curves`

use std::path::PathBuf;
use wkam_core::fixtures;
use wkam_core::io::write_curve_csv;

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "configs/curves".to_string())
        .into();
    std::fs::create_dir_all(&dir).expect("create output directory");
    let count = 1024;
    write_curve_csv(
        &dir.join("zero_section.csv"),
        &fixtures::zero_section(count),
    )
    .unwrap();
    write_curve_csv(
        &dir.join("adapted_graph.csv"),
        &fixtures::adapted_graph_curve(count),
    )
    .unwrap();
    write_curve_csv(&dir.join("circle.csv"), &fixtures::circle(0.3, count)).unwrap();
    write_curve_csv(&dir.join("fold.csv"), &fixtures::fold_curve(count)).unwrap();
    println!("wrote 4 curves to {}", dir.display());
}
