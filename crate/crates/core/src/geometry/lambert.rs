use crate::error::{Error, Result};

/// Real Lambert W: solves w·e^w = x on branch 0 (w ≥ −1) or branch −1
/// (w ≤ −1, requiring −1/e ≤ x < 0). Halley iteration from a branch-aware
/// initial guess; the returned value satisfies |w·e^w − x| < 1e-12.
pub fn lambert_w(branch: i32, x: f64) -> Result<f64> {
    if branch != 0 && branch != -1 {
        return Err(Error::invalid(format!("Lambert W branch must be 0 or -1, got {branch}")));
    }
    if !x.is_finite() {
        return Err(Error::non_finite("Lambert W argument"));
    }
    // 2(ex+1) ≥ 0 characterises the real domain; tolerate rounding at the
    // branch point itself.
    let q = 2.0 * (std::f64::consts::E * x + 1.0);
    if q < 0.0 {
        if q > -1e-12 {
            return Ok(-1.0);
        }
        return Err(Error::domain(None, format!("Lambert W argument {x} is below -1/e")));
    }
    if branch == -1 && x >= 0.0 {
        return Err(Error::domain(None, "Lambert W branch -1 needs a negative argument"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let p = q.sqrt();
    let mut w = if branch == 0 {
        if x < -0.32 {
            // Series around the branch point w = −1 + p − p²/3 + …
            -1.0 + p - p * p / 3.0
        } else if x <= std::f64::consts::E {
            // ln(1+x) matches W₀ at 0 and grows at the right rate.
            x.ln_1p()
        } else {
            // Asymptotic expansion for large arguments.
            let l1 = x.ln();
            let l2 = l1.ln();
            l1 - l2 + l2 / l1
        }
    } else if x < -0.32 {
        -1.0 - p - p * p / 3.0
    } else {
        // Near 0⁻ the lower branch behaves like ln(−x) − ln(−ln(−x)).
        let l = (-x).ln();
        l - (-l).ln()
    };

    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() < 1e-13 {
            break;
        }
        // Halley step for g(w) = w·e^w − x.
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w -= step;
    }

    let residual = (w * w.exp() - x).abs();
    if residual >= 1e-12 {
        return Err(Error::convergence("Lambert W Halley iteration", 100, residual));
    }
    Ok(w)
}
