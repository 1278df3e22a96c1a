//! Writes a synthetic FRED-format directory: `cargo run --example synthetic_data -- DIR [SEED]`.

fn main() -> vixbond::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = args.next().unwrap_or_else(|| "synthetic_fred".into());
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    vixbond::pipeline::synthetic::write_synthetic_fred_dir(std::path::Path::new(&dir), seed)?;
    println!("wrote {dir}");
    Ok(())
}
