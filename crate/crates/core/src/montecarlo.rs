//! Logical error rate sweeps, interval estimates, scaling fits and
//! concatenation predictions.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::decoder::DecoderTable;
use crate::error::{Error, Result};
use crate::gadgets::{shor_ec_round, steane_ec_circuit};
use crate::noise::{sample_code_capacity, sample_run, NoiseModel, ShotOutcome};
use crate::stabilizer::StabilizerCode;

/// Lower bound on the threshold from rigorous concatenation proofs.
pub const THRESHOLD_RIGOROUS_LOWER_BOUND: f64 = 2e-5;
/// Threshold estimate from optimized protocol simulations.
pub const THRESHOLD_OPTIMIZED_ESTIMATE: f64 = 0.05;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

/// Shots per independently seeded RNG stream.
pub const CHUNK: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Protocol {
    /// Depolarizing faults on data only, perfect decoding.
    CodeCapacity,
    /// Shor error correction with three repetitions, every location noisy.
    CircuitShor,
    /// Steane error correction, every location noisy.
    CircuitSteane,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::CodeCapacity => "code-capacity",
            Protocol::CircuitShor => "circuit-shor",
            Protocol::CircuitSteane => "circuit-steane",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "code-capacity" => Ok(Protocol::CodeCapacity),
            "circuit-shor" => Ok(Protocol::CircuitShor),
            "circuit-steane" => Ok(Protocol::CircuitSteane),
            _ => Err(Error::Parse {
                index: 0,
                message: format!("unknown protocol `{s}`"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub p: f64,
    pub shots: u64,
    pub failures: u64,
    pub aborts: u64,
    pub p_l: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub protocol: Protocol,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub points: Vec<PointEstimate>,
    pub fit_c: Option<f64>,
    pub fit_exponent: Option<f64>,
    pub pseudothreshold: Option<f64>,
}

impl MonteCarloReport {
    pub fn to_ron(&self) -> Result<String> {
        ron::ser::to_string_pretty(self, ron::ser::PrettyConfig::default()).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn from_ron(text: &str) -> Result<Self> {
        ron::from_str(text).map_err(|e| Error::Parse {
            index: 0,
            message: e.to_string(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,shots,failures,p_L,ci_low,ci_high\n");
        for pt in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                pt.p, pt.shots, pt.failures, pt.p_l, pt.ci_low, pt.ci_high
            ));
        }
        out
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let z2 = z * z;
    let denom = n + z2;
    let center = (k + z2 / 2.0) / denom;
    let half = z / denom * (k * (n - k) / n + z2 / 4.0).sqrt();
    let lo = if k == 0.0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    /// Constant of the exponent-2 fit.
    pub c: f64,
    /// Free least-squares slope of log p_L against log p.
    pub exponent: f64,
}

fn usable(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(p, pl)| *p > 0.0 && *pl > 0.0)
        .map(|(p, pl)| (p.ln(), pl.ln()))
        .collect();
    if logs.len() < 3 {
        return Err(Error::NoFit(format!(
            "{} points with nonzero failures, need 3; increase shots",
            logs.len()
        )));
    }
    Ok(logs)
}

/// Fits `(p, p_L)` pairs on log-log axes.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<ScalingFit> {
    let logs = usable(points)?;
    let m = logs.len() as f64;
    let mx = logs.iter().map(|l| l.0).sum::<f64>() / m;
    let my = logs.iter().map(|l| l.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::NoFit("all points share one p".into()));
    }
    let log_c = logs.iter().map(|(x, y)| y - 2.0 * x).sum::<f64>() / m;
    Ok(ScalingFit {
        c: log_c.exp(),
        exponent: sxy / sxx,
    })
}

/// Where the fitted `C p²` crosses `p`.
pub fn pseudothreshold(points: &[(f64, f64)]) -> Result<f64> {
    Ok(1.0 / fit_quadratic(points)?.c)
}

fn check_rates(p: f64, p_t: f64) -> Result<()> {
    if !(p > 0.0 && p_t > 0.0 && p.is_finite() && p_t.is_finite()) {
        return Err(Error::Domain(format!("rates must be positive, got p={p}, p_t={p_t}")));
    }
    Ok(())
}

/// Logical rate after `levels` rounds of concatenation: `p_t (p/p_t)^(2^L)`.
pub fn concatenated_rate(p: f64, p_t: f64, levels: u32) -> Result<f64> {
    check_rates(p, p_t)?;
    let mut r = p / p_t;
    for _ in 0..levels {
        r *= r;
    }
    Ok(p_t * r)
}

/// Least number of levels bringing the logical rate to `epsilon` or below.
pub fn levels_needed(p: f64, p_t: f64, epsilon: f64) -> Result<u32> {
    check_rates(p, p_t)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon {epsilon} outside (0, 1)")));
    }
    if p <= epsilon {
        return Ok(0);
    }
    if p >= p_t {
        return Err(Error::Diverges { p, p_t });
    }
    let guess = ((epsilon / p_t).ln() / (p / p_t).ln()).log2().ceil().max(0.0) as u32;
    let mut l = guess;
    while concatenated_rate(p, p_t, l)? > epsilon {
        l += 1;
    }
    while l > 0 && concatenated_rate(p, p_t, l - 1)? <= epsilon {
        l -= 1;
    }
    Ok(l)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of the stream for one chunk of one sweep point.
pub fn stream_seed(seed: u64, point: u64, chunk: u64) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ point) ^ chunk)
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub protocol: Protocol,
    pub ps: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    /// Thread count; 0 picks the rayon default.
    pub workers: usize,
}

enum Engine {
    CodeCapacity,
    Circuit(Circuit),
}

fn run_chunk(
    engine: &Engine,
    code: &StabilizerCode,
    table: &DecoderTable,
    p: f64,
    shots: u64,
    seed: u64,
) -> Result<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = NoiseModel::uniform(p)?;
    let (mut fails, mut aborts) = (0, 0);
    for _ in 0..shots {
        let out = match engine {
            Engine::CodeCapacity => sample_code_capacity(code, table, p, &mut rng)?,
            Engine::Circuit(c) => sample_run(c, code, table, &noise, &mut rng)?,
        };
        match out {
            ShotOutcome::LogicalFailure => fails += 1,
            ShotOutcome::Abort => aborts += 1,
            ShotOutcome::Success => {}
        }
    }
    Ok((fails, aborts))
}

/// Estimates the logical failure rate at each `p`. Results depend only on
/// the seed, never on the worker count.
pub fn estimate_logical_rate(code: &StabilizerCode, sweep: &Sweep) -> Result<MonteCarloReport> {
    if sweep.shots == 0 {
        return Err(Error::Domain("shots must be at least 1".into()));
    }
    let engine = match sweep.protocol {
        Protocol::CodeCapacity => Engine::CodeCapacity,
        Protocol::CircuitShor => Engine::Circuit(shor_ec_round(code, 3)?),
        Protocol::CircuitSteane => Engine::Circuit(steane_ec_circuit(code)?),
    };
    let t = code.known_distance().map_or(1, |d| (d.max(1) - 1) / 2);
    let table = DecoderTable::build(code, t).complete();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let chunks = sweep.shots.div_ceil(CHUNK);
    let mut points = Vec::with_capacity(sweep.ps.len());
    for (pi, &p) in sweep.ps.iter().enumerate() {
        NoiseModel::uniform(p)?;
        let results: Vec<Result<(u64, u64)>> = pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let n = CHUNK.min(sweep.shots - c * CHUNK);
                    run_chunk(&engine, code, &table, p, n, stream_seed(sweep.seed, pi as u64, c))
                })
                .collect()
        });
        let (mut failures, mut aborts) = (0, 0);
        for r in results {
            let (f, a) = r?;
            failures += f;
            aborts += a;
        }
        let (ci_low, ci_high) = wilson_interval(failures, sweep.shots, Z_95);
        points.push(PointEstimate {
            p,
            shots: sweep.shots,
            failures,
            aborts,
            p_l: failures as f64 / sweep.shots as f64,
            ci_low,
            ci_high,
        });
    }
    let pairs: Vec<(f64, f64)> = points.iter().map(|pt| (pt.p, pt.p_l)).collect();
    let fit = fit_quadratic(&pairs).ok();
    Ok(MonteCarloReport {
        protocol: sweep.protocol,
        n: code.n(),
        k: code.k(),
        seed: sweep.seed,
        points,
        fit_c: fit.map(|f| f.c),
        fit_exponent: fit.map(|f| f.exponent),
        pseudothreshold: fit.map(|f| 1.0 / f.c),
    })
}
