//! Monte Carlo estimation of coverage for the nearest-neighbour model, the
//! superposition model, and the non-cooperative baseline, plus the pairing
//! statistics used to validate the point-process layer.

use crate::config::{Association, DerivedConstants, NetworkConfig};
use crate::error::{Error, Result};
use crate::point_process::{
    cluster_mutual_nn, sample_ppp, sample_superposition, Point, SuperpositionPattern,
};
use crate::signals::{sample_pair_signal, CooperationScheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    NearestNeighbour,
    Superposition,
    NonCooperativeBaseline,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::NearestNeighbour => "nn",
            Model::Superposition => "superposition",
            Model::NonCooperativeBaseline => "baseline",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationPlan {
    pub model: Model,
    pub association: Association,
    /// scheme of the serving pair
    pub scheme: CooperationScheme,
    /// scheme of interfering pairs; defaults to `scheme` (set to OFF for the
    /// MAX-serving/OFF-interfering composite)
    pub interferer_scheme: Option<CooperationScheme>,
    /// linear SINR thresholds, ascending
    pub thresholds: Vec<f64>,
    pub trials: u64,
    pub window_radius: f64,
    pub guard_radius: f64,
    pub base_seed: u64,
    /// add the mean interference of the field beyond the window; without it
    /// the truncation bias dwarfs the confidence interval at low beta
    pub compensate_far_field: bool,
}

impl SimulationPlan {
    /// Plan with the default window (15/sqrt(lambda)) and guard
    /// (3/sqrt(lambda)) for the given configuration.
    pub fn new(
        model: Model,
        cfg: &NetworkConfig,
        thresholds: Vec<f64>,
        trials: u64,
        base_seed: u64,
    ) -> Self {
        let scale = cfg.lambda.sqrt();
        Self {
            model,
            association: cfg.association.clone(),
            scheme: cfg.scheme.clone(),
            interferer_scheme: None,
            thresholds,
            trials,
            window_radius: 15.0 / scale,
            guard_radius: 3.0 / scale,
            base_seed,
            compensate_far_field: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if !(self.window_radius > self.guard_radius && self.guard_radius > 0.0) {
            return Err(Error::Config(format!(
                "need window_radius > guard_radius > 0, got {} and {}",
                self.window_radius, self.guard_radius
            )));
        }
        if self.thresholds.is_empty() {
            return Err(Error::Config("empty threshold grid".into()));
        }
        let mut prev = 0.0;
        for &t in &self.thresholds {
            if !(t > prev) {
                return Err(Error::Config(
                    "thresholds must be positive and strictly ascending".into(),
                ));
            }
            prev = t;
        }
        Ok(())
    }

    fn interferer_scheme(&self) -> CooperationScheme {
        self.interferer_scheme.clone().unwrap_or_else(|| self.scheme.clone())
    }
}

#[derive(Debug, Clone)]
pub struct CoverageCurve {
    pub thresholds: Vec<f64>,
    pub estimates: Vec<f64>,
    /// 1.96 sqrt(p(1-p)/n) per threshold
    pub ci_half_widths: Vec<f64>,
    pub trials: u64,
    pub warnings: Vec<String>,
    pub elapsed: Duration,
}

impl CoverageCurve {
    pub fn ci_low(&self, i: usize) -> f64 {
        (self.estimates[i] - self.ci_half_widths[i]).max(0.0)
    }

    pub fn ci_high(&self, i: usize) -> f64 {
        (self.estimates[i] + self.ci_half_widths[i]).min(1.0)
    }
}

/// Worker count: `NNCOOP_THREADS` if set, else the machine's parallelism.
pub fn worker_count() -> usize {
    std::env::var("NNCOOP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(usize::from)
                .unwrap_or(1)
        })
}

/// Mean interference power of the field beyond the window radius, added as a
/// deterministic term so window truncation does not bias low-beta runs.
fn far_field_mean(plan: &SimulationPlan, cfg: &NetworkConfig, consts: &DerivedConstants) -> f64 {
    let w = plan.window_radius;
    let beta = cfg.beta;
    let per_point = match plan.model {
        Model::NonCooperativeBaseline => cfg.lambda,
        _ => {
            let kappa = plan.interferer_scheme().mean_pair_power_factor(w, cfg);
            cfg.lambda * (1.0 - consts.delta) + consts.delta * cfg.lambda / 2.0 * kappa
        }
    };
    2.0 * std::f64::consts::PI * cfg.power / (beta - 2.0) * w.powf(2.0 - beta) * per_point
}

/// Estimate the coverage curve of `plan`. Deterministic for a fixed plan:
/// trials are split into fixed-size chunks, each with its own seed derived
/// from `base_seed`, and merged as integer success counts, so the result is
/// independent of the worker count.
pub fn simulate_coverage(
    plan: &SimulationPlan,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
) -> Result<CoverageCurve> {
    plan.validate()?;
    cfg.validate()?;
    let start = Instant::now();
    let mut warnings = Vec::new();
    if plan.window_radius * cfg.lambda.sqrt() < 10.0 {
        warnings.push(format!(
            "window radius {} is under 10/sqrt(lambda); estimates may be window-limited",
            plan.window_radius
        ));
    }
    if !plan.compensate_far_field && cfg.beta < 3.0 {
        warnings.push(
            "far-field compensation disabled with beta < 3: truncation bias may exceed the CI"
                .into(),
        );
    }

    let mu_tail = if plan.compensate_far_field {
        far_field_mean(plan, cfg, consts)
    } else {
        0.0
    };

    const CHUNK: u64 = 256;
    let n_chunks = plan.trials.div_ceil(CHUNK);
    let next = AtomicU64::new(0);
    let totals: Mutex<Vec<u64>> = Mutex::new(vec![0; plan.thresholds.len()]);
    let workers = worker_count().min(n_chunks as usize).max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut local = vec![0u64; plan.thresholds.len()];
                loop {
                    let chunk = next.fetch_add(1, Ordering::Relaxed);
                    if chunk >= n_chunks {
                        break;
                    }
                    let in_chunk = CHUNK.min(plan.trials - chunk * CHUNK);
                    let mut rng = ChaCha8Rng::seed_from_u64(plan.base_seed ^ chunk);
                    for _ in 0..in_chunk {
                        let ratio = trial_ratio(plan, cfg, consts, mu_tail, &mut rng);
                        // common random numbers: one SINR sample serves the
                        // whole ascending grid
                        for (i, &t) in plan.thresholds.iter().enumerate() {
                            if ratio > t {
                                local[i] += 1;
                            } else {
                                break;
                            }
                        }
                    }
                }
                let mut totals = totals.lock().unwrap();
                for (a, b) in totals.iter_mut().zip(&local) {
                    *a += b;
                }
            });
        }
    });

    let counts = totals.into_inner().unwrap();
    let n = plan.trials as f64;
    let estimates: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let ci_half_widths = estimates
        .iter()
        .map(|&p| 1.96 * (p * (1.0 - p) / n).sqrt())
        .collect();
    Ok(CoverageCurve {
        thresholds: plan.thresholds.clone(),
        estimates,
        ci_half_widths,
        trials: plan.trials,
        warnings,
        elapsed: start.elapsed(),
    })
}

/// One trial's signal-to-(noise+interference) ratio.
fn trial_ratio<R: Rng>(
    plan: &SimulationPlan,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    mu_tail: f64,
    rng: &mut R,
) -> f64 {
    let (signal, interference) = match plan.model {
        Model::NonCooperativeBaseline => baseline_trial(plan, cfg, rng),
        Model::NearestNeighbour => nn_trial(plan, cfg, rng),
        Model::Superposition => superposition_trial(plan, cfg, consts, rng),
    };
    let denom = cfg.sigma2 + interference + mu_tail;
    if denom == 0.0 {
        if signal > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        signal / denom
    }
}

fn single_power<R: Rng>(d: f64, cfg: &NetworkConfig, rng: &mut R) -> f64 {
    let h: f64 = rng.sample(Exp1);
    h * cfg.power * d.powf(-cfg.beta)
}

fn baseline_trial<R: Rng>(
    plan: &SimulationPlan,
    cfg: &NetworkConfig,
    rng: &mut R,
) -> (f64, f64) {
    let pattern = sample_ppp(cfg.lambda, plan.window_radius, rng);
    let norms: Vec<f64> = pattern.points.iter().map(Point::norm).collect();
    match plan.association {
        Association::FixedTransmitter { r0 } => {
            let signal = single_power(r0, cfg, rng);
            let interference = norms.iter().map(|&d| single_power(d, cfg, rng)).sum();
            (signal, interference)
        }
        Association::ClosestCluster => {
            let Some(serving) = argmin(&norms) else {
                return (0.0, 0.0);
            };
            let signal = single_power(norms[serving], cfg, rng);
            let interference = norms
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != serving)
                .map(|(_, &d)| single_power(d, cfg, rng))
                .sum();
            (signal, interference)
        }
    }
}

fn argmin(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
}

/// Interfering-pair emission. The NN model's pairs have no canonical parent,
/// so the member order is randomized; under OFF with q != 0.5 this matters.
fn interfering_pair_power<R: Rng>(
    da: f64,
    db: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
    randomize_order: bool,
    rng: &mut R,
) -> f64 {
    let (r, z) = if randomize_order && rng.gen::<bool>() {
        (db, da)
    } else {
        (da, db)
    };
    sample_pair_signal(r, z, scheme, cfg, rng)
}

fn nn_trial<R: Rng>(plan: &SimulationPlan, cfg: &NetworkConfig, rng: &mut R) -> (f64, f64) {
    let pattern = sample_ppp(cfg.lambda, plan.window_radius, rng);
    let clusters = cluster_mutual_nn(&pattern);
    let norms: Vec<f64> = pattern.points.iter().map(Point::norm).collect();
    let mut partner = vec![usize::MAX; norms.len()];
    for &(i, j) in &clusters.pairs {
        partner[i] = j;
        partner[j] = i;
    }
    let interferer_scheme = plan.interferer_scheme();

    let (signal, serving_a, serving_b) = match plan.association {
        Association::FixedTransmitter { r0 } => (single_power(r0, cfg, rng), usize::MAX, usize::MAX),
        Association::ClosestCluster => {
            let Some(closest) = argmin(&norms) else {
                return (0.0, 0.0);
            };
            let mate = partner[closest];
            if mate == usize::MAX {
                (single_power(norms[closest], cfg, rng), closest, usize::MAX)
            } else {
                // member order randomized: the pair has no canonical parent
                let (r, z) = if rng.gen::<bool>() {
                    (norms[closest], norms[mate])
                } else {
                    (norms[mate], norms[closest])
                };
                (
                    sample_pair_signal(r, z, &plan.scheme, cfg, rng),
                    closest,
                    mate,
                )
            }
        }
    };

    let mut interference = 0.0;
    for &(i, j) in &clusters.pairs {
        if i == serving_a || i == serving_b {
            continue;
        }
        interference +=
            interfering_pair_power(norms[i], norms[j], &interferer_scheme, cfg, true, rng);
    }
    for &i in &clusters.singles {
        if i == serving_a {
            continue;
        }
        interference += single_power(norms[i], cfg, rng);
    }
    (signal, interference)
}

fn superposition_trial<R: Rng>(
    plan: &SimulationPlan,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    rng: &mut R,
) -> (f64, f64) {
    let pat = sample_superposition(cfg.lambda, consts, plan.window_radius, rng);
    let interferer_scheme = plan.interferer_scheme();

    let pair_norms: Vec<(f64, f64)> = pat
        .pairs
        .iter()
        .map(|(a, b)| (a.norm(), b.norm()))
        .collect();
    let single_norms: Vec<f64> = pat.singles.iter().map(Point::norm).collect();

    match plan.association {
        Association::FixedTransmitter { r0 } => {
            let signal = single_power(r0, cfg, rng);
            let mut interference: f64 =
                single_norms.iter().map(|&d| single_power(d, cfg, rng)).sum();
            for &(r, z) in &pair_norms {
                interference +=
                    interfering_pair_power(r, z, &interferer_scheme, cfg, false, rng);
            }
            (signal, interference)
        }
        Association::ClosestCluster => {
            let nearest_single = argmin(&single_norms);
            let nearest_pair = pair_norms
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .0.partial_cmp(&b.1 .0).unwrap())
                .map(|(i, _)| i);
            let r1 = nearest_single.map_or(f64::INFINITY, |i| single_norms[i]);
            let (r2, z2) = nearest_pair.map_or((f64::INFINITY, f64::INFINITY), |i| pair_norms[i]);
            if r1.is_infinite() && r2.is_infinite() {
                return (0.0, 0.0);
            }

            // association and exclusion per the model: serve the single if
            // it beats both members of the nearest-parent pair; interfering
            // pairs are dropped entirely when either member sits inside the
            // exclusion radius (the model's literal rule, not a physical one)
            let single_serves = r1 < r2.min(z2);
            let (signal, serving_pair, rho_pairs) = if single_serves {
                (single_power(r1, cfg, rng), usize::MAX, r1)
            } else {
                let idx = nearest_pair.unwrap();
                (
                    sample_pair_signal(r2, z2, &plan.scheme, cfg, rng),
                    idx,
                    r2,
                )
            };

            let mut interference = 0.0;
            for (i, &d) in single_norms.iter().enumerate() {
                if single_serves && nearest_single == Some(i) {
                    continue;
                }
                interference += single_power(d, cfg, rng);
            }
            for (i, &(r, z)) in pair_norms.iter().enumerate() {
                if i == serving_pair || r <= rho_pairs || z <= rho_pairs {
                    continue;
                }
                interference +=
                    interfering_pair_power(r, z, &interferer_scheme, cfg, false, rng);
            }
            (signal, interference)
        }
    }
}

/// Aggregated pairing statistics from repeated nearest-neighbour
/// clusterings, plus nearest-pair radius samples from the superposition
/// model. Feeds the distributional acceptance checks.
#[derive(Debug, Clone)]
pub struct PairStatistics {
    pub interior_points: u64,
    pub paired_interior_points: u64,
    /// within-pair distances of pairs whose midpoint is interior
    pub pair_distances: Vec<f64>,
    /// (nearest parent radius, its daughter's radius) per superposition draw
    pub r2z2: Vec<(f64, f64)>,
}

impl PairStatistics {
    pub fn pair_fraction(&self) -> f64 {
        self.paired_interior_points as f64 / self.interior_points as f64
    }
}

pub fn simulate_pair_statistics(
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    nn_patterns: u64,
    superposition_draws: u64,
    window_radius: f64,
    guard_radius: f64,
    base_seed: u64,
) -> PairStatistics {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    let interior = window_radius - guard_radius;
    let mut stats = PairStatistics {
        interior_points: 0,
        paired_interior_points: 0,
        pair_distances: Vec::new(),
        r2z2: Vec::new(),
    };
    for _ in 0..nn_patterns {
        let pattern = sample_ppp(cfg.lambda, window_radius, &mut rng);
        let clusters = cluster_mutual_nn(&pattern);
        for &(i, j) in &clusters.pairs {
            let a = pattern.points[i];
            let b = pattern.points[j];
            for p in [a, b] {
                if p.norm() <= interior {
                    stats.interior_points += 1;
                    stats.paired_interior_points += 1;
                }
            }
            let mid = Point {
                x: 0.5 * (a.x + b.x),
                y: 0.5 * (a.y + b.y),
            };
            if mid.norm() <= interior {
                stats.pair_distances.push(a.dist(&b));
            }
        }
        for &i in &clusters.singles {
            if pattern.points[i].norm() <= interior {
                stats.interior_points += 1;
            }
        }
    }
    for _ in 0..superposition_draws {
        let pat: SuperpositionPattern =
            sample_superposition(cfg.lambda, consts, window_radius, &mut rng);
        if let Some((parent, daughter)) = pat
            .pairs
            .iter()
            .min_by(|a, b| a.0.norm().partial_cmp(&b.0.norm()).unwrap())
        {
            stats.r2z2.push((parent.norm(), daughter.norm()));
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{derive_constants, NetworkConfig};

    fn grid() -> Vec<f64> {
        (0..7).map(|i| 10f64.powf(-1.0 + 2.0 * i as f64 / 6.0)).collect()
    }

    fn base_plan(model: Model, cfg: &NetworkConfig, trials: u64) -> SimulationPlan {
        SimulationPlan::new(model, cfg, grid(), trials, 42)
    }

    #[test]
    fn determinism_and_monotonicity() {
        let cfg = NetworkConfig::default();
        let consts = derive_constants(&cfg).unwrap();
        let plan = base_plan(Model::Superposition, &cfg, 2000);
        let a = simulate_coverage(&plan, &cfg, &consts).unwrap();
        let b = simulate_coverage(&plan, &cfg, &consts).unwrap();
        assert_eq!(a.estimates, b.estimates);
        for w in a.estimates.windows(2) {
            assert!(w[1] <= w[0]);
        }
        for (i, &p) in a.estimates.iter().enumerate() {
            assert!((0.0..=1.0).contains(&p));
            assert!(a.ci_low(i) <= p && p <= a.ci_high(i));
        }
    }

    #[test]
    fn single_trial_is_degenerate() {
        let cfg = NetworkConfig::default();
        let consts = derive_constants(&cfg).unwrap();
        let mut plan = base_plan(Model::NonCooperativeBaseline, &cfg, 1);
        plan.association = Association::ClosestCluster;
        let curve = simulate_coverage(&plan, &cfg, &consts).unwrap();
        for (p, w) in curve.estimates.iter().zip(&curve.ci_half_widths) {
            assert!(*p == 0.0 || *p == 1.0);
            assert_eq!(*w, 0.0);
        }
    }

    #[test]
    fn plan_validation() {
        let cfg = NetworkConfig::default();
        let mut plan = base_plan(Model::Superposition, &cfg, 10);
        plan.guard_radius = plan.window_radius + 1.0;
        assert!(plan.validate().is_err());
        let mut plan = base_plan(Model::Superposition, &cfg, 10);
        plan.thresholds = vec![1.0, 1.0];
        assert!(plan.validate().is_err());
        plan.thresholds = vec![1.0, 0.5];
        assert!(plan.validate().is_err());
    }

    #[test]
    fn baseline_matches_closed_form() {
        // beta=4, t=1, sigma2=0: coverage = 1/(1+pi/4)
        let cfg = NetworkConfig {
            beta: 4.0,
            association: Association::ClosestCluster,
            ..NetworkConfig::default()
        };
        let consts = derive_constants(&cfg).unwrap();
        let mut plan = base_plan(Model::NonCooperativeBaseline, &cfg, 40_000);
        plan.thresholds = vec![1.0];
        let curve = simulate_coverage(&plan, &cfg, &consts).unwrap();
        let want = 1.0 / (1.0 + std::f64::consts::PI / 4.0);
        let tol = 2.0 * curve.ci_half_widths[0];
        assert!(
            (curve.estimates[0] - want).abs() < tol,
            "{} vs {want} (tol {tol})",
            curve.estimates[0]
        );
    }

    #[test]
    fn superposition_fixed_matches_analytic() {
        let cfg = NetworkConfig {
            beta: 3.0,
            ..NetworkConfig::default()
        };
        let consts = derive_constants(&cfg).unwrap();
        let quad = crate::numeric::QuadConfig::default();
        let mut plan = base_plan(Model::Superposition, &cfg, 30_000);
        plan.thresholds = vec![0.3, 1.0, 3.0];
        let curve = simulate_coverage(&plan, &cfg, &consts).unwrap();
        for (i, &t) in plan.thresholds.iter().enumerate() {
            let want = crate::coverage::coverage_fixed(
                t,
                1.0,
                &CooperationScheme::Nsc,
                &cfg,
                &consts,
                &quad,
            )
            .unwrap();
            let tol = 2.0 * curve.ci_half_widths[i];
            assert!(
                (curve.estimates[i] - want).abs() < tol,
                "t={t}: {} vs {want} (tol {tol})",
                curve.estimates[i]
            );
        }
    }

    #[test]
    fn window_doubling_changes_little() {
        let cfg = NetworkConfig {
            beta: 3.0,
            ..NetworkConfig::default()
        };
        let consts = derive_constants(&cfg).unwrap();
        let mut plan = base_plan(Model::Superposition, &cfg, 10_000);
        plan.thresholds = vec![1.0];
        let small = simulate_coverage(&plan, &cfg, &consts).unwrap();
        plan.window_radius *= 2.0;
        let big = simulate_coverage(&plan, &cfg, &consts).unwrap();
        let gap = (small.estimates[0] - big.estimates[0]).abs();
        assert!(
            gap < small.ci_half_widths[0] + big.ci_half_widths[0],
            "gap {gap}"
        );
    }

    #[test]
    fn pair_statistics_sane() {
        let cfg = NetworkConfig::default();
        let consts = derive_constants(&cfg).unwrap();
        let stats = simulate_pair_statistics(&cfg, &consts, 40, 200, 30.0, 6.0, 11);
        assert!(stats.interior_points > 1000);
        let frac = stats.pair_fraction();
        assert!((frac - consts.delta).abs() < 0.03, "fraction {frac}");
        assert!(!stats.pair_distances.is_empty());
        assert_eq!(stats.r2z2.len(), 200);
        // mean within-pair distance ~ Rayleigh(alpha) mean
        let mean: f64 =
            stats.pair_distances.iter().sum::<f64>() / stats.pair_distances.len() as f64;
        let want = consts.alpha * (std::f64::consts::PI / 2.0f64).sqrt();
        assert!((mean - want).abs() < 0.1 * want, "{mean} vs {want}");
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = NetworkConfig::default();
        let consts = derive_constants(&cfg).unwrap();
        let plan = base_plan(Model::NearestNeighbour, &cfg, 1500);
        let a = simulate_coverage(&plan, &cfg, &consts).unwrap();
        std::env::set_var("NNCOOP_THREADS", "1");
        let b = simulate_coverage(&plan, &cfg, &consts).unwrap();
        std::env::remove_var("NNCOOP_THREADS");
        assert_eq!(a.estimates, b.estimates);
    }
}
