//! Sampling estimate of the Lipschitz constant of `G`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::mapping::MappingSpec;
use crate::rng::Stream;

/// Multiplier applied to the largest sampled ratio.
pub const SAFETY: f64 = 1.5;
/// Offset scale of the close pairs.
pub const CLOSE_SCALE: f64 = 1e-4;
/// Finite-difference power steps per close pair.
pub const POWER_STEPS: usize = 3;
/// Half-width of the sampling window along unbounded coordinates.
pub const UNBOUNDED_WINDOW: f64 = 1.0;

/// `1.5 × max ‖G(u) − G(v)‖/‖u − v‖` over `samples` far pairs and, for each,
/// a short chain of close pairs at distance `1e−4`. Deterministic in `seed`.
pub fn estimate_lipschitz(g: &MappingSpec, domain: &FeasibleSet, samples: usize, seed: u64) -> Result<f64> {
    if samples < 2 {
        return Err(Error::Usage(format!("need at least 2 samples, got {samples}")));
    }
    let n = domain.dim();
    if g.dim() != n {
        return Err(Error::Dimension {
            context: "estimate_lipschitz",
            expected: n,
            got: g.dim(),
        });
    }
    let windows: Vec<(f64, f64)> = (0..n).map(|i| domain.sampling_window(i, UNBOUNDED_WINDOW)).collect();
    if n == 0 || windows.iter().all(|(lo, hi)| lo == hi) {
        return Err(Error::Estimation("sampling domain is a single point".into()));
    }
    let mut s = Stream::new(seed, crate::rng::streams::SAMPLING);
    let draw = |s: &mut Stream| DVector::from_fn(n, |i, _| s.uniform_in(windows[i].0, windows[i].1));
    let vertex = |s: &mut Stream| {
        DVector::from_fn(n, |i, _| if s.uniform() < 0.5 { windows[i].0 } else { windows[i].1 })
    };
    let mut best: f64 = 0.0;
    let mut ratio = |u: &DVector<f64>, v: &DVector<f64>| -> Result<()> {
        let d = (u - v).norm();
        if d > 0.0 {
            let r = (g.eval(u) - g.eval(v)).norm() / d;
            if !r.is_finite() {
                return Err(Error::Estimation("non-finite difference quotient".into()));
            }
            best = best.max(r);
        }
        Ok(())
    };
    for t in 0..samples {
        // alternate interior draws with vertices of the window, where
        // bounded maps tend to be steepest
        let u = if t % 2 == 0 { draw(&mut s) } else { vertex(&mut s) };
        let v = draw(&mut s);
        ratio(&u, &v)?;
        // close pair: a random direction refined by a few finite-difference
        // power steps, pulled back into the window
        let mut dir = DVector::from_fn(n, |_, _| s.normal());
        for step in 0..=POWER_STEPS {
            let nd = dir.norm();
            if !(nd > 0.0 && nd.is_finite()) {
                break;
            }
            dir /= nd;
            let w = DVector::from_fn(n, |i, _| (u[i] + CLOSE_SCALE * dir[i]).clamp(windows[i].0, windows[i].1));
            ratio(&u, &w)?;
            if step < POWER_STEPS {
                dir = g.eval(&w) - g.eval(&u);
            }
        }
    }
    Ok(SAFETY * best)
}
