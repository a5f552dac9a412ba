//! Integrability of |Dw|^s for negative s; the threshold is s = -3.

use inflap::analyzer::{negative_power_scan, predicted_negative_power_verdict, sample_family, Exclusion};
use inflap::field::Region;
use inflap::problems::sharp_w;

fn main() -> inflap::Result<()> {
    let spacings: Vec<f64> = (5..=9).map(|k| 2f64.powi(-k)).collect();
    let family = sample_family(sharp_w, 0.75, &spacings)?;
    let region = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
    for s in [-1.5, -3.0, -4.5] {
        let rep = negative_power_scan(&family, s, &region, &Exclusion::Ridge { x: 0.0 })?;
        println!(
            "s = {s:<5} measured {:<16} predicted {}",
            rep.verdict.label(),
            predicted_negative_power_verdict(s).label()
        );
    }
    Ok(())
}
