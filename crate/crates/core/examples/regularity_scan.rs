//! Mesh scans of ∫ |D(|Dw|^α)|^p against the closed-form threshold
//! (3 - α) p / 3 = 1 for w = -|x1|^(4/3).

use inflap::analyzer::{predicted_verdict, sample_family, sobolev_scan, Exclusion};
use inflap::field::Region;
use inflap::problems::sharp_w;

fn main() -> inflap::Result<()> {
    let spacings: Vec<f64> = (5..=9).map(|k| 2f64.powi(-k)).collect();
    let family = sample_family(sharp_w, 0.75, &spacings)?;
    let region = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
    let ridge = Exclusion::Ridge { x: 0.0 };
    for (alpha, p) in [(1.5, 2.0), (2.0, 2.0), (1.0, 1.5), (1.0, 2.0), (2.5, 3.0)] {
        let rep = sobolev_scan(&family, alpha, p, 0.0, &region, &ridge)?;
        println!(
            "alpha {alpha:<4} p {p:<4} measured {:<16} predicted {:<16} log slope {:.3}",
            rep.verdict.label(),
            predicted_verdict(alpha, p).label(),
            rep.fit.log_slope
        );
    }
    Ok(())
}
