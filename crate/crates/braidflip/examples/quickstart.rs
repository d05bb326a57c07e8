use braidflip::{analyze_braid, RecouplingParams, RecouplingTuple};

fn main() -> braidflip::Result<()> {
    let braid = braidflip::fixtures::five_point_orbit(1.0 / 3.0, 1)?;
    let tuple = RecouplingTuple::new(RecouplingParams::new(4));
    let analysis = analyze_braid(&braid, &tuple, 512, 1e-9)?;
    assert_eq!(analysis.operator.dim(), 160);
    println!("{} flip events", analysis.events.len());
    Ok(())
}
