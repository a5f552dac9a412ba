//! Exploratory: integrability of |D|Dw|^α|^q for q in [2, 3].

use inflap::analyzer::{gehring_probe, sample_family, Exclusion};
use inflap::field::Region;
use inflap::problems::sharp_w;

fn main() -> inflap::Result<()> {
    let spacings: Vec<f64> = (5..=9).map(|k| 2f64.powi(-k)).collect();
    let family = sample_family(sharp_w, 0.75, &spacings)?;
    let region = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
    let rep = gehring_probe(&family, 2.0, &region, &Exclusion::Ridge { x: 0.0 }, &[2.0, 2.5, 3.0], true)?;
    rep.write_csv(std::io::stdout().lock())?;
    Ok(())
}
