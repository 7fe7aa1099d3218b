//! Batch checks over the continuum model and the combined verification run.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::model::{
    box_radius, decide_box_containment, phi, witness_product_side, BoxSpec, EpsFamily, PointRQ,
    Predicates,
};
use super::{ContinuumError, Rat};
use crate::report::{Check, VerificationReport};

/// Random streams; each check draws from its own.
const STREAM_SAMPLES: u64 = 1;
const STREAM_SPOT_CHECKS: u64 = 2;
const STREAM_EPS: u64 = 3;

const SPOT_CHECKS: usize = 100;
const SPOT_CHECK_MAX_Z: i64 = 1_000_000;
const MAX_WINDOW: i64 = 1_000_000;
const MAX_Z_RANGE: u64 = 10_000_000;

/// Which second factor the run is about. Both behave identically: every
/// point the checks touch is rational.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SecondFactor {
    #[default]
    Q,
    R,
}

impl fmt::Display for SecondFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SecondFactor::Q => "Q",
            SecondFactor::R => "R",
        })
    }
}

impl FromStr for SecondFactor {
    type Err = ContinuumError;

    fn from_str(s: &str) -> Result<Self, ContinuumError> {
        match s {
            "Q" | "q" => Ok(SecondFactor::Q),
            "R" | "r" => Ok(SecondFactor::R),
            other => Err(ContinuumError::Config(format!(
                "unknown mode `{other}` (expected Q or R)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaperConfig {
    pub q: Rat,
    pub z_range: u64,
    pub delta_grid: Vec<Rat>,
    pub eps_trials: usize,
    pub samples: usize,
    pub seed: u64,
    pub mode: SecondFactor,
    /// Horizontal extent of the random preimage samples.
    pub window: Rat,
}

impl Default for PaperConfig {
    fn default() -> Self {
        PaperConfig {
            q: Rat::zero(),
            z_range: 1000,
            delta_grid: reciprocal_grid(100),
            eps_trials: 100,
            samples: 100_000,
            seed: 42,
            mode: SecondFactor::Q,
            window: Rat::int(100),
        }
    }
}

/// `{1/k : 1 ≤ k ≤ n}`.
pub fn reciprocal_grid(n: u32) -> Vec<Rat> {
    (1..=n as i64).map(|k| Rat::new(1, k)).collect()
}

impl PaperConfig {
    pub fn validate(&self) -> Result<(), ContinuumError> {
        let bad = |msg: String| Err(ContinuumError::Config(msg));
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.z_range == 0 || self.z_range > MAX_Z_RANGE {
            return bad(format!("z_range must lie in 1..={MAX_Z_RANGE}"));
        }
        if self.eps_trials == 0 {
            return bad("eps_trials must be at least 1".into());
        }
        if self.delta_grid.is_empty() {
            return bad("delta grid is empty".into());
        }
        if let Some(d) = self.delta_grid.iter().find(|d| !d.is_positive()) {
            return bad(format!("delta {d} must be positive"));
        }
        if !self.window.is_positive() || self.window > Rat::int(MAX_WINDOW) {
            return bad(format!("window must lie in (0, {MAX_WINDOW}]"));
        }
        Ok(())
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_radius(rng: &mut ChaCha8Rng) -> Rat {
    let den = rng.gen_range(2..=256i64);
    let num = rng.gen_range(1..=den / 2);
    Rat::new(num, den)
}

/// A random neighborhood of the integer class: a default radius and up to
/// four overrides, placed where the reciprocal delta grid looks.
pub fn random_eps_family(rng: &mut ChaCha8Rng) -> EpsFamily {
    let default = random_radius(rng);
    let overrides = (0..rng.gen_range(0..=4))
        .map(|_| (BigInt::from(rng.gen_range(-5..=120i64)), random_radius(rng)))
        .collect();
    EpsFamily::new(default, overrides).expect("radii drawn from (0, 1/2]")
}

/// Deterministic random points of `[−window, window] × [q − 2, q + 2]`.
/// A quarter of the horizontal coordinates are integers, so `B_q` is hit.
pub fn sample_points(q: &Rat, count: usize, window: &Rat, seed: u64) -> Vec<PointRQ> {
    let mut rng = rng(seed, STREAM_SAMPLES);
    (0..count)
        .map(|_| {
            let den = if rng.gen_bool(0.25) {
                1
            } else {
                rng.gen_range(2..=64i64)
            };
            let bound = (window * Rat::int(den))
                .floor()
                .to_i64()
                .expect("window is bounded");
            let x = Rat::new(rng.gen_range(-bound..=bound), den);
            let rden = rng.gen_range(1..=64i64);
            let r = q + Rat::new(rng.gen_range(-2 * rden..=2 * rden), rden);
            PointRQ::new(x, r)
        })
        .collect()
}

/// Integers, half-integers, quarter points and points hugging the box
/// radii, for small and large `|z|`.
pub fn adversarial_points(q: &Rat) -> Vec<PointRQ> {
    let tiny = Rat::new(1, 1000);
    let zs = (-12..=12).chain([-1001, -1000, -999, -100, 100, 999, 1000, 1001]);
    let mut out = Vec::new();
    for z in zs {
        let zr = Rat::int(z);
        let radius = box_radius(&BigInt::from(z));
        let xs = [
            zr.clone(),
            &zr + Rat::half(),
            &zr + Rat::new(1, 4),
            &zr - Rat::new(1, 4),
            &zr + Rat::half() - &tiny,
            &zr - Rat::half() + &tiny,
        ];
        let offsets = [
            Rat::zero(),
            radius.clone(),
            &radius - &radius * &tiny,
            &radius + &radius * &tiny,
            Rat::new(1, 2),
            Rat::new(3, 4),
            Rat::one() - &tiny,
            Rat::one(),
        ];
        for x in &xs {
            out.push(PointRQ::new(x.clone(), q.clone()));
            for off in offsets.iter().skip(1) {
                out.push(PointRQ::new(x.clone(), q + off));
                out.push(PointRQ::new(x.clone(), q - off));
            }
        }
    }
    out
}

/// `Φ(p) ∈ Φ(A_q)  ⟺  p ∈ A_q ∪ B_q` on random and adversarial points.
pub fn check_preimage_identity(
    q: &Rat,
    sample_count: usize,
    window: &Rat,
    seed: u64,
) -> Result<Check, ContinuumError> {
    check_preimage_identity_with(&Predicates::default(), q, sample_count, window, seed)
}

/// As [`check_preimage_identity`], with explicit predicates.
pub fn check_preimage_identity_with(
    preds: &Predicates,
    q: &Rat,
    sample_count: usize,
    window: &Rat,
    seed: u64,
) -> Result<Check, ContinuumError> {
    if sample_count == 0 {
        return Err(ContinuumError::Config(
            "sample_count must be at least 1".into(),
        ));
    }
    if !window.is_positive() || *window > Rat::int(MAX_WINDOW) {
        return Err(ContinuumError::Config(format!(
            "window must lie in (0, {MAX_WINDOW}]"
        )));
    }
    let adversarial = adversarial_points(q);
    let random = sample_points(q, sample_count, window, seed);
    let points: Vec<&PointRQ> = adversarial.iter().chain(&random).collect();
    let violations: Vec<&PointRQ> = points
        .par_iter()
        .filter(|p| {
            let (c, r) = phi(p);
            preds.in_phi_aq(q, &c, &r) != (preds.in_aq(q, p) || preds.in_bq(q, p))
        })
        .map(|p| *p)
        .collect();
    let mut check = Check::new("preimage_identity", violations.is_empty()).with_details(json!({
        "claim": "Phi^-1(Phi(A_q)) = A_q u B_q",
        "adversarial_points": adversarial.len(),
        "random_samples": random.len(),
        "violations": violations.len(),
    }));
    if let Some(p) = violations.first() {
        let (c, r) = phi(p);
        check = check.with_witness(json!({
            "point": p,
            "in_phi_aq": preds.in_phi_aq(q, &c, &r),
            "in_aq": preds.in_aq(q, p),
            "in_bq": preds.in_bq(q, p),
        }));
    }
    Ok(check)
}

/// Every preimage `(z, q)` of `([0], q)` has the box
/// `(z − 1/2, z + 1/2) × (q − 1/(1+|z|), q + 1/(1+|z|))` inside `A_q ∪ B_q`.
///
/// `|z| ≤ z_range` is swept explicitly. Beyond the sweep, the exact
/// characterization (contained iff `δ ≤ 1/(1+|z|)`) is spot-checked on both
/// sides at random `|z| ≤ 10^6` with random horizontal radii.
pub fn check_quotient_side(q: &Rat, z_range: u64, seed: u64) -> Result<Check, ContinuumError> {
    if z_range == 0 {
        return Err(ContinuumError::Config("z_range must be at least 1".into()));
    }
    let half = Rat::half();
    let zr = z_range as i64;
    let failures: Vec<i64> = (-zr..=zr)
        .into_par_iter()
        .map(|z| {
            let z_big = BigInt::from(z);
            decide_box_containment(q, &z_big, &half, &box_radius(&z_big)).map(|d| (z, d))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|(_, d)| !d.is_contained())
        .map(|(z, _)| z)
        .collect();

    let mut rng = rng(seed, STREAM_SPOT_CHECKS);
    let mut spot_failures = Vec::new();
    let mut max_abs_z = 0;
    for _ in 0..SPOT_CHECKS {
        let magnitude = rng.gen_range(1..=SPOT_CHECK_MAX_Z);
        let z = if rng.gen_bool(0.5) {
            magnitude
        } else {
            -magnitude
        };
        max_abs_z = max_abs_z.max(magnitude);
        let z_big = BigInt::from(z);
        let eps = random_radius(&mut rng);
        let radius = box_radius(&z_big);
        let above = radius.mediant(&Rat::int(magnitude).recip());
        let at = decide_box_containment(q, &z_big, &eps, &radius)?;
        let beyond = decide_box_containment(q, &z_big, &eps, &above)?;
        if !at.is_contained() || beyond.is_contained() {
            spot_failures.push(z);
        }
    }

    let ok = failures.is_empty() && spot_failures.is_empty();
    let mut check = Check::new("quotient_side", ok).with_details(json!({
        "claim": "A_q u B_q is a neighborhood of (z, q) for every integer z",
        "swept_z": 2 * z_range + 1,
        "sweep_failures": failures.len(),
        "spot_checks": SPOT_CHECKS,
        "spot_check_max_abs_z": max_abs_z,
        "spot_check_failures": spot_failures.len(),
        "characterization": "contained iff delta <= 1/(1+|z|)",
    }));
    if let Some(z) = failures.first().or(spot_failures.first()) {
        check = check.with_witness(json!({ "z": z }));
    }
    Ok(check)
}

/// For every `δ` in the grid and `eps_trials` random neighborhoods `U(ε)` of
/// the integer class, `U(ε) × (q − δ, q + δ)` has a point outside `Φ(A_q)`.
pub fn check_product_side(
    q: &Rat,
    delta_grid: &[Rat],
    eps_trials: usize,
    seed: u64,
) -> Result<Check, ContinuumError> {
    let mut rng = rng(seed, STREAM_EPS);
    let families: Vec<EpsFamily> = (0..eps_trials)
        .map(|_| random_eps_family(&mut rng))
        .collect();
    let preds = Predicates::default();
    let outcomes: Vec<Result<serde_json::Value, serde_json::Value>> = delta_grid
        .par_iter()
        .flat_map_iter(|delta| families.iter().map(move |eps| (delta, eps)))
        .map(|(delta, eps)| {
            let spec =
                BoxSpec::new(eps.clone(), delta.clone()).map_err(|e| json!(e.to_string()))?;
            match witness_product_side(q, &spec) {
                Ok(w)
                    if spec.contains(q, &w.point, &w.r) && !preds.in_phi_aq(q, &w.point, &w.r) =>
                {
                    Ok(json!({ "delta": delta, "eps": eps, "witness": w }))
                }
                Ok(w) => Err(json!({ "delta": delta, "eps": eps, "rejected": w })),
                Err(e) => Err(json!({ "delta": delta, "eps": eps, "error": e.to_string() })),
            }
        })
        .collect();
    let first_failure = outcomes.iter().find_map(|o| o.as_ref().err()).cloned();
    let witness = first_failure
        .clone()
        .or_else(|| outcomes.first().and_then(|o| o.as_ref().ok()).cloned());
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    let mut check = Check::new("product_side", first_failure.is_none()).with_details(json!({
        "claim": "no basic product neighborhood of ([0], q) lies inside Phi(A_q)",
        "boxes": outcomes.len(),
        "delta_values": delta_grid.len(),
        "eps_trials": eps_trials,
        "failures": failures,
    }));
    if let Some(w) = witness {
        check = check.with_witness(w);
    }
    Ok(check)
}

/// Run the three checks in order and aggregate them into one report.
pub fn run_paper_verification(config: &PaperConfig) -> Result<VerificationReport, ContinuumError> {
    config.validate()?;
    let checks = vec![
        check_preimage_identity(&config.q, config.samples, &config.window, config.seed)?,
        check_quotient_side(&config.q, config.z_range, config.seed)?,
        check_product_side(
            &config.q,
            &config.delta_grid,
            config.eps_trials,
            config.seed,
        )?,
    ];
    let mut report = VerificationReport::new(
        "verify-paper",
        serde_json::to_value(config).expect("config serializes"),
        checks,
    );
    report.notes.push(
        "All points are rational and all comparisons exact; every claim checked here is realized at rational points."
            .into(),
    );
    report.notes.push(
        "Non-containment is shown for boxes U(eps) x (q-delta, q+delta); each basic cylinder contains such a box, \
         so the conclusion holds for the box-generated and the cylinder-generated product stack alike."
            .into(),
    );
    if config.mode == SecondFactor::R {
        report.notes.push(
            "Mode R: replacing Q by R as the second factor changes no computation, since every witness and \
             every tested point is rational."
                .into(),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(PaperConfig::default().validate().is_ok());
        let cases = [
            PaperConfig {
                samples: 0,
                ..Default::default()
            },
            PaperConfig {
                z_range: 0,
                ..Default::default()
            },
            PaperConfig {
                eps_trials: 0,
                ..Default::default()
            },
            PaperConfig {
                delta_grid: vec![],
                ..Default::default()
            },
            PaperConfig {
                delta_grid: vec![Rat::zero()],
                ..Default::default()
            },
            PaperConfig {
                window: Rat::zero(),
                ..Default::default()
            },
        ];
        for c in cases {
            assert!(matches!(
                run_paper_verification(&c),
                Err(ContinuumError::Config(_))
            ));
        }
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let q = Rat::new(7, 3);
        let w = Rat::int(5);
        let a = sample_points(&q, 500, &w, 9);
        assert_eq!(a, sample_points(&q, 500, &w, 9));
        assert_ne!(a, sample_points(&q, 500, &w, 10));
        for p in &a {
            assert!(p.x.abs() <= w);
            assert!((&p.r - &q).abs() <= Rat::int(2));
        }
        assert!(a.iter().filter(|p| p.x.is_integer()).count() > 100);
    }

    #[test]
    fn small_run_passes() {
        let config = PaperConfig {
            z_range: 20,
            delta_grid: reciprocal_grid(10),
            eps_trials: 5,
            samples: 2000,
            ..Default::default()
        };
        let report = run_paper_verification(&config).unwrap();
        assert!(report.passed(), "{report:#?}");
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            ["preimage_identity", "quotient_side", "product_side"]
        );
    }

    #[test]
    fn mode_r_adds_a_note() {
        let config = PaperConfig {
            z_range: 3,
            delta_grid: reciprocal_grid(3),
            eps_trials: 2,
            samples: 10,
            mode: SecondFactor::R,
            ..Default::default()
        };
        let report = run_paper_verification(&config).unwrap();
        assert!(report.passed());
        assert!(report.notes.iter().any(|n| n.starts_with("Mode R")));
    }

    #[test]
    fn broken_bq_radius_is_caught() {
        let broken = Predicates::with_bq_radius(Rat::half());
        let check =
            check_preimage_identity_with(&broken, &Rat::zero(), 100, &Rat::int(10), 1).unwrap();
        assert!(!check.status.is_pass());
        assert!(check.witness.is_some());
    }
}
