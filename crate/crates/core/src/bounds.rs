//! Quantum Singleton, Hamming and Gilbert–Varshamov bounds. Logs are base 2.

use serde::Serialize;

use crate::error::{Error, Result};

/// Binary entropy with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("entropy argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// `n - log K >= 2d - 2`.
pub fn singleton_check(n: usize, dim: u64, d: usize) -> Result<bool> {
    Ok(singleton_slack(n, dim, d)? >= -1e-12)
}

/// `(n - log K) - (2d - 2)`; zero means the bound holds with equality.
pub fn singleton_slack(n: usize, dim: u64, d: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Domain("code dimension K must be at least 2".into()));
    }
    if d < 1 {
        return Err(Error::Domain("distance must be at least 1".into()));
    }
    Ok(n as f64 - (dim as f64).log2() - (2.0 * d as f64 - 2.0))
}

fn rate_formula(x: f64) -> Result<f64> {
    Ok(1.0 - x * 3f64.log2() - binary_entropy(x)?)
}

/// Rate achievable per the Gilbert–Varshamov bound at relative distance `delta = d/n`.
pub fn gv_rate(delta: f64) -> Result<f64> {
    rate_formula(delta)
}

/// Rate ceiling for non-degenerate codes at `tau = t/n`.
pub fn hamming_rate(tau: f64) -> Result<f64> {
    rate_formula(tau)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub singleton_ok: bool,
    pub singleton_slack: f64,
    /// Hamming rate ceiling at `t = ⌊(d-1)/2⌋`, clamped to `[0, 1]`.
    pub hamming_rate_bound: f64,
    /// Gilbert–Varshamov rate at `d/n`, clamped to `[0, 1]`.
    pub gv_rate_bound: f64,
    /// `2^k Σ_{j<=t} C(n,j) 3^j - 2^n`; nonpositive when nondegenerate packing fits.
    pub hamming_packing_slack: f64,
    pub notes: String,
}

/// Counts error patterns against syndrome space: `2^k Σ_{j<=t} C(n,j) 3^j - 2^n`.
pub fn hamming_packing_slack(n: usize, k: usize, t: usize) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=t.min(n) {
        if j > 0 {
            binom = binom * (n + 1 - j) as f64 / j as f64;
        }
        sum += binom * 3f64.powi(j as i32);
    }
    2f64.powi(k as i32) * sum - 2f64.powi(n as i32)
}

pub fn bound_report(n: usize, k: usize, d: usize) -> Result<BoundReport> {
    if n == 0 || k > n || d == 0 || d > n {
        return Err(Error::Domain(format!(
            "need n >= 1, 0 <= k <= n, 1 <= d <= n (got n={n}, k={k}, d={d})"
        )));
    }
    let t = (d - 1) / 2;
    let rate = k as f64 / n as f64;
    // K = 2^k; with k = 0 the Singleton check uses K = 1 which the formula rejects
    let slack = if k == 0 {
        n as f64 - (2.0 * d as f64 - 2.0)
    } else if k < 64 {
        singleton_slack(n, 1u64 << k, d)?
    } else {
        n as f64 - k as f64 - (2.0 * d as f64 - 2.0)
    };
    let ham = hamming_rate(t as f64 / n as f64)?.clamp(0.0, 1.0);
    let gv = gv_rate(d as f64 / n as f64)?.clamp(0.0, 1.0);
    let mut notes = Vec::new();
    if slack.abs() < 1e-12 {
        notes.push("Singleton bound satisfied with equality".to_string());
    } else if slack > 0.0 {
        notes.push("Singleton bound satisfied".to_string());
    } else {
        notes.push("Singleton bound violated: no such code exists".to_string());
    }
    let packing = hamming_packing_slack(n, k, t);
    if packing == 0.0 {
        notes.push("finite Hamming bound met with equality (perfect code)".into());
    } else if packing > 0.0 {
        notes.push("finite Hamming bound exceeded (possible only for degenerate codes)".into());
    }
    if rate > ham + 1e-12 {
        notes.push("rate above the asymptotic Hamming curve".into());
    }
    if rate <= gv + 1e-12 {
        notes.push("rate within the asymptotic Gilbert-Varshamov existence region".into());
    }
    Ok(BoundReport {
        n,
        k,
        d,
        singleton_ok: slack >= -1e-12,
        singleton_slack: slack,
        hamming_rate_bound: ham,
        gv_rate_bound: gv,
        hamming_packing_slack: packing,
        notes: notes.join("; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_examples() {
        assert!(singleton_check(5, 2, 3).unwrap());
        assert_eq!(singleton_slack(5, 2, 3).unwrap(), 0.0);
        assert!(!singleton_check(4, 2, 3).unwrap());
        assert!(singleton_check(5, 1, 3).is_err());
        assert!(singleton_check(5, 2, 0).is_err());
    }

    #[test]
    fn gv_limits_and_reference_value() {
        assert_eq!(gv_rate(0.0).unwrap(), 1.0);
        assert!((gv_rate(1e-12).unwrap() - 1.0).abs() < 1e-9);
        // 40-digit reference: 0.37250815633860316060...
        assert!((gv_rate(0.1).unwrap() - 0.372_508_156_338_603_2).abs() < 1e-14);
        assert!(gv_rate(-0.1).is_err());
        assert!(gv_rate(1.5).is_err());
        assert!(gv_rate(f64::NAN).is_err());
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rates_decrease_on_lower_range() {
        let mut prev = hamming_rate(0.0).unwrap();
        for i in 1..=18 {
            let x = i as f64 * 0.01;
            let r = hamming_rate(x).unwrap();
            assert!(r < prev);
            assert_eq!(r, gv_rate(x).unwrap());
            prev = r;
        }
    }

    #[test]
    fn report_for_five_qubit_code() {
        let r = bound_report(5, 1, 3).unwrap();
        assert!(r.singleton_ok);
        assert!(r.notes.contains("equality"));
        assert_eq!(r.hamming_packing_slack, 0.0);
        assert!(r.notes.contains("perfect code"));
        assert!(bound_report(7, 1, 3).unwrap().hamming_packing_slack < 0.0);
        assert!((0.0..=1.0).contains(&r.gv_rate_bound));
        assert!(bound_report(4, 1, 3).map(|r| !r.singleton_ok).unwrap());
    }
}
