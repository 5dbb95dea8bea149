//! Print the per-component deviation bounds for a few rotation budgets.
//! Components near saturation get almost no upward room while mid-range
//! components can move the most; that asymmetry is the whole point of
//! adapting the noise to the component value.
//!
//!     cargo run --example deviation_bounds

use arcsin::injector::{delta_minus, delta_plus};
use arcsin::Result;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

fn main() -> Result<()> {
    println!("{:>6} | {:>22} | {:>22}", "y0", "delta+ (pi/6, pi/2)", "delta- (pi/6, pi/2)");
    for i in (-10..=10).step_by(2) {
        let y = i as f64 / 10.0;
        let dp6 = delta_plus(y, FRAC_PI_6)?;
        let dp2 = delta_plus(y, FRAC_PI_2)?;
        let dm6 = delta_minus(y, FRAC_PI_6)?;
        let dm2 = delta_minus(y, FRAC_PI_2)?;
        println!("{y:>6.1} | {dp6:>10.6} {dp2:>10.6}  | {dm6:>10.6} {dm2:>10.6}");
    }

    // the bound comes from a plain 2-D rotation: rotating a unit vector with
    // vertical component sin(theta) by alpha raises that component to
    // sin(theta + alpha), and the rotated vector's similarity is cos(alpha)
    let theta: f64 = 0.4;
    let alpha: f64 = 0.3;
    let y = theta.sin();
    println!();
    println!("rotation check at theta={theta}, alpha={alpha}:");
    println!("  sin(theta+alpha)      = {}", (theta + alpha).sin());
    println!("  y + delta_plus(y, a)  = {}", y + delta_plus(y, alpha)?);
    println!("  cos(alpha)            = {}", alpha.cos());
    Ok(())
}
