//! Rotation-bounded adaptive noise injection.
//!
//! The injector perturbs each feature component within the deviation range a
//! bounded 2-D rotation would allow. For a component y in [-1, 1], treat y as
//! the vertical coordinate of a unit vector; rotating that vector by at most
//! `alpha` moves y upward by at most `delta_plus(y, alpha)` and downward by at
//! most `-delta_minus(y, alpha)`. Scaling standard normal noise by these
//! per-component bounds yields perturbations that shrink where a component is
//! already near saturation, so large components keep their meaning while
//! small ones explore more.
//!
//! Two mechanisms sit on top of the bounds:
//! - an injection pool: several candidate noise matrices are applied and,
//!   row by row, the candidate most similar to the original row wins;
//! - a feedback controller: the rotation budget is drawn from an angle
//!   interval that tightens or relaxes so the measured batch-average cosine
//!   similarity tracks a target threshold.

use std::f64::consts::FRAC_PI_2;

use crate::batch::EmbeddingBatch;
use crate::error::{Error, Result};
use crate::math::{batch_cosine_sim, clamp_components, cosine_sim, gaussian_sample, mean};
use crate::rng::SeededRng;

/// Interval widths below this reset the controller to the full range.
const MIN_RANGE_WIDTH: f64 = 1e-6;

fn check_component(y: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&y) {
        return Err(Error::OutOfRange {
            name: "component",
            value: y,
            min: -1.0,
            max: 1.0,
        });
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&alpha) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            min: 0.0,
            max: FRAC_PI_2,
        });
    }
    Ok(())
}

/// Both deviation bounds for one component; domain checks already done.
/// `alpha == 0` short-circuits to exact zeros so that zero rotation
/// reproduces inputs bit for bit.
fn delta_pair_unchecked(y: f64, alpha: f64) -> (f64, f64) {
    if alpha == 0.0 {
        return (0.0, 0.0);
    }
    let theta = y.asin();
    let up = if theta + alpha < FRAC_PI_2 {
        (theta + alpha).sin() - y
    } else {
        1.0 - y
    };
    let down = if theta - alpha > -FRAC_PI_2 {
        (theta - alpha).sin() - y
    } else {
        -1.0 - y
    };
    (up.max(0.0), down.min(0.0))
}

/// Largest upward adjustment to component `y` consistent with rotating its
/// conceptual unit vector by at most `alpha`. Always in [0, 1 - y].
pub fn delta_plus(y: f64, alpha: f64) -> Result<f64> {
    check_component(y)?;
    check_alpha(alpha)?;
    Ok(delta_pair_unchecked(y, alpha).0)
}

/// Largest downward adjustment (as a non-positive number) to component `y`
/// under a rotation of at most `alpha`. Always in [-1 - y, 0].
pub fn delta_minus(y: f64, alpha: f64) -> Result<f64> {
    check_component(y)?;
    check_alpha(alpha)?;
    Ok(delta_pair_unchecked(y, alpha).1)
}

fn delta_bounds_flat(values: &[f64], alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let mut up = Vec::with_capacity(values.len());
    let mut down = Vec::with_capacity(values.len());
    for &y in values {
        let (u, d) = delta_pair_unchecked(y, alpha);
        up.push(u);
        down.push(d);
    }
    (up, down)
}

fn apply_noise_flat(values: &[f64], up: &[f64], down: &[f64], noise: &[f64], out: &mut [f64]) {
    for i in 0..values.len() {
        let xi = noise[i];
        out[i] = if xi >= 0.0 {
            values[i] + up[i] * xi
        } else {
            values[i] - down[i] * xi
        };
    }
}

/// Per-component noise injection with an explicit noise matrix as the
/// standard-normal draw: positive noise scales the upward bound, negative
/// noise the downward bound. Input must already be clamped to [-1, 1].
pub fn inject_with_noise(
    e: &EmbeddingBatch,
    alpha: f64,
    noise: &EmbeddingBatch,
) -> Result<EmbeddingBatch> {
    if !e.same_shape(noise) {
        return Err(Error::ShapeMismatch {
            left: e.shape(),
            right: noise.shape(),
        });
    }
    check_alpha(alpha)?;
    e.ensure_within(-1.0, 1.0)?;
    let (up, down) = delta_bounds_flat(e.as_slice(), alpha);
    let mut out = vec![0.0; e.as_slice().len()];
    apply_noise_flat(e.as_slice(), &up, &down, noise.as_slice(), &mut out);
    EmbeddingBatch::from_flat(e.rows(), e.cols(), out)
}

/// Injection driven by a fresh standard-normal draw from `rng`.
pub fn inject_plain(e: &EmbeddingBatch, alpha: f64, rng: &mut SeededRng) -> Result<EmbeddingBatch> {
    check_alpha(alpha)?;
    e.ensure_within(-1.0, 1.0)?;
    let noise = gaussian_sample(rng, e.rows(), e.cols())?;
    inject_with_noise(e, alpha, &noise)
}

/// Draw `pool_size` independent standard-normal matrices of shape
/// rows x cols, in order, from one stream.
pub fn build_noise_pool(
    rng: &mut SeededRng,
    rows: usize,
    cols: usize,
    pool_size: usize,
) -> Result<Vec<EmbeddingBatch>> {
    if pool_size == 0 {
        return Err(Error::Empty("noise pool"));
    }
    (0..pool_size).map(|_| gaussian_sample(rng, rows, cols)).collect()
}

/// Apply every pool candidate and keep, per row, the candidate whose
/// augmented row is most similar to the original. Ties keep the lowest
/// candidate index; with one candidate this is plain injection.
pub fn inject_with_pool(
    e: &EmbeddingBatch,
    alpha: f64,
    pool: &[EmbeddingBatch],
) -> Result<EmbeddingBatch> {
    if pool.is_empty() {
        return Err(Error::Empty("noise pool"));
    }
    for cand in pool {
        if !e.same_shape(cand) {
            return Err(Error::ShapeMismatch {
                left: e.shape(),
                right: cand.shape(),
            });
        }
    }
    check_alpha(alpha)?;
    e.ensure_within(-1.0, 1.0)?;

    let (rows, cols) = e.shape();
    let (up, down) = delta_bounds_flat(e.as_slice(), alpha);

    let mut best = vec![0.0; rows * cols];
    let mut best_sim = vec![f64::NEG_INFINITY; rows];
    let mut buf = vec![0.0; rows * cols];
    for cand in pool {
        apply_noise_flat(e.as_slice(), &up, &down, cand.as_slice(), &mut buf);
        for r in 0..rows {
            let span = r * cols..(r + 1) * cols;
            let sim = cosine_sim(e.row(r), &buf[span.clone()]).map_err(|err| match err {
                Error::ZeroNorm { .. } => Error::ZeroNorm { row: r },
                other => other,
            })?;
            if sim > best_sim[r] {
                best_sim[r] = sim;
                best[span.clone()].copy_from_slice(&buf[span]);
            }
        }
    }
    EmbeddingBatch::from_flat(rows, cols, best)
}

/// The controller's mutable angle interval plus its similarity target.
///
/// Invariants: 0 <= lower <= upper <= pi/2, threshold in (0, 1), and the
/// band [threshold - epsilon, threshold + epsilon] stays inside (0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct AngleRangeState {
    lower: f64,
    upper: f64,
    threshold: f64,
    epsilon: f64,
    last_alpha: f64,
}

impl AngleRangeState {
    /// Full initial range [0, pi/2].
    pub fn new(threshold: f64, epsilon: f64) -> Result<Self> {
        Self::with_bounds(0.0, FRAC_PI_2, threshold, epsilon)
    }

    pub fn with_bounds(lower: f64, upper: f64, threshold: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&threshold) || threshold == 0.0 {
            return Err(Error::OutOfRange {
                name: "threshold",
                value: threshold,
                min: 0.0,
                max: 1.0,
            });
        }
        if !(epsilon > 0.0) || epsilon >= threshold.min(1.0 - threshold) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: epsilon,
                min: 0.0,
                max: threshold.min(1.0 - threshold),
            });
        }
        if !(0.0..=FRAC_PI_2).contains(&lower)
            || !(0.0..=FRAC_PI_2).contains(&upper)
            || lower > upper
        {
            return Err(Error::InvalidInterval { lo: lower, hi: upper });
        }
        Ok(AngleRangeState {
            lower,
            upper,
            threshold,
            epsilon,
            last_alpha: 0.0,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The rotation budget chosen for the most recent batch.
    pub fn last_alpha(&self) -> f64 {
        self.last_alpha
    }

    /// Record an externally chosen budget (tests and custom drivers;
    /// `draw_alpha` does this automatically).
    pub fn set_last_alpha(&mut self, alpha: f64) {
        self.last_alpha = alpha;
    }

    /// Draw the batch budget uniformly from [lower, upper] and record it.
    pub fn draw_alpha(&mut self, rng: &mut SeededRng) -> f64 {
        let alpha = rng.uniform_in(self.lower, self.upper);
        self.last_alpha = alpha;
        alpha
    }

    /// Feedback rule: similarity below the band tightens the upper bound to
    /// the last budget, above the band relaxes the lower bound to it, inside
    /// the band leaves the interval alone. An update that inverts the
    /// interval or shrinks it below 1e-6 resets to [0, pi/2] so the
    /// controller resumes exploring instead of freezing.
    pub fn update(&mut self, avg_sim: f64) {
        if avg_sim < self.threshold - self.epsilon {
            self.upper = self.last_alpha;
        } else if avg_sim > self.threshold + self.epsilon {
            self.lower = self.last_alpha;
        } else {
            return;
        }
        if self.lower > self.upper || self.upper - self.lower < MIN_RANGE_WIDTH {
            self.lower = 0.0;
            self.upper = FRAC_PI_2;
        }
    }
}

/// Injection hyperparameters.
#[derive(Clone, Debug, PartialEq)]
pub struct InjectorConfig {
    /// Candidates per batch; 1 degenerates to plain injection.
    pub pool_size: usize,
    /// Target batch-average similarity the controller tracks.
    pub threshold: f64,
    /// Half-width of the no-update band around the threshold.
    pub epsilon: f64,
    /// Clamp outputs back into [-1, 1]. Off by default: unclipped normal
    /// noise may exceed the deviation bounds, and the raw result is what the
    /// injection rule defines.
    pub post_clamp: bool,
    pub seed: u64,
}

impl Default for InjectorConfig {
    fn default() -> Self {
        InjectorConfig {
            pool_size: 8,
            threshold: 0.9,
            epsilon: 0.01,
            post_clamp: false,
            seed: 0,
        }
    }
}

impl InjectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pool_size == 0 {
            return Err(Error::Empty("noise pool"));
        }
        AngleRangeState::new(self.threshold, self.epsilon).map(|_| ())
    }
}

/// One forward call's controller observation. Bounds are the interval
/// after the update.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub batch: usize,
    pub alpha: f64,
    pub avg_similarity: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Per-batch controller trajectory, one record per forward call.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InjectionTrace {
    records: Vec<TraceRecord>,
}

impl InjectionTrace {
    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn push(&mut self, record: TraceRecord) {
        self.records.push(record);
    }
}

/// The complete injector: clamp, draw a budget, pooled injection, measure,
/// update the controller, trace. Forward calls must be serialized per
/// instance; the controller is a sequential feedback loop.
#[derive(Clone, Debug)]
pub struct ArcSinInjector {
    config: InjectorConfig,
    state: AngleRangeState,
    rng: SeededRng,
    trace: InjectionTrace,
}

impl ArcSinInjector {
    pub fn new(config: InjectorConfig) -> Result<Self> {
        let state = AngleRangeState::new(config.threshold, config.epsilon)?;
        Self::with_state(config, state)
    }

    /// Start from custom bounds (the threshold/epsilon of `state` win).
    pub fn with_state(config: InjectorConfig, state: AngleRangeState) -> Result<Self> {
        config.validate()?;
        let rng = SeededRng::new(config.seed);
        Ok(ArcSinInjector {
            config,
            state,
            rng,
            trace: InjectionTrace::default(),
        })
    }

    pub fn config(&self) -> &InjectorConfig {
        &self.config
    }

    pub fn state(&self) -> &AngleRangeState {
        &self.state
    }

    pub fn trace(&self) -> &InjectionTrace {
        &self.trace
    }

    /// Augment one batch and advance the controller.
    ///
    /// The average similarity fed to the controller (and traced) is measured
    /// against the exact tensor returned to the caller, i.e. after the
    /// optional post-clamp.
    pub fn forward(&mut self, e: &EmbeddingBatch) -> Result<EmbeddingBatch> {
        let clamped = clamp_components(e, -1.0, 1.0)?;
        let alpha = self.state.draw_alpha(&mut self.rng);
        let pool = build_noise_pool(
            &mut self.rng,
            clamped.rows(),
            clamped.cols(),
            self.config.pool_size,
        )?;
        let selected = inject_with_pool(&clamped, alpha, &pool)?;
        let output = if self.config.post_clamp {
            clamp_components(&selected, -1.0, 1.0)?
        } else {
            selected
        };
        let avg = mean(&batch_cosine_sim(&clamped, &output)?);
        self.state.update(avg);
        self.trace.push(TraceRecord {
            batch: self.trace.len(),
            alpha,
            avg_similarity: avg,
            lower: self.state.lower(),
            upper: self.state.upper(),
        });
        Ok(output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent evaluation of the deviation bounds through the
    // angle-addition identity: sin(asin(y) +- a) = y cos a +- sqrt(1-y^2) sin a.
    fn oracle_delta_plus(y: f64, alpha: f64) -> f64 {
        if y.asin() + alpha < FRAC_PI_2 {
            y * alpha.cos() + (1.0 - y * y).sqrt() * alpha.sin() - y
        } else {
            1.0 - y
        }
    }

    fn oracle_delta_minus(y: f64, alpha: f64) -> f64 {
        if y.asin() - alpha > -FRAC_PI_2 {
            y * alpha.cos() - (1.0 - y * y).sqrt() * alpha.sin() - y
        } else {
            -1.0 - y
        }
    }

    #[test]
    fn delta_plus_saturated_component_is_zero() {
        for alpha in [0.0, 0.3, 1.0, FRAC_PI_2] {
            assert_eq!(delta_plus(1.0, alpha).unwrap(), 0.0);
        }
    }

    #[test]
    fn delta_plus_half_with_sixth_turn() {
        let got = delta_plus(0.5, std::f64::consts::FRAC_PI_6).unwrap();
        let expected = 3f64.sqrt() / 2.0 - 0.5;
        assert!((got - expected).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn delta_plus_caps_at_one() {
        // asin(0.9) + pi/4 exceeds a quarter turn, so the cap branch applies.
        let got = delta_plus(0.9, std::f64::consts::FRAC_PI_4).unwrap();
        assert!((got - 0.1).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn delta_minus_negative_saturation_is_zero() {
        for alpha in [0.0, 0.3, 1.0, FRAC_PI_2] {
            assert_eq!(delta_minus(-1.0, alpha).unwrap(), 0.0);
        }
    }

    #[test]
    fn delta_minus_half_with_third_turn() {
        let got = delta_minus(0.5, std::f64::consts::FRAC_PI_3).unwrap();
        assert!((got + 1.0).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn zero_rotation_gives_exact_zero_deltas() {
        for i in -10..=10 {
            let y = i as f64 / 10.0;
            assert_eq!(delta_plus(y, 0.0).unwrap(), 0.0);
            assert_eq!(delta_minus(y, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn delta_domain_errors() {
        assert!(delta_plus(1.5, 0.1).is_err());
        assert!(delta_plus(0.5, -0.1).is_err());
        assert!(delta_plus(0.5, FRAC_PI_2 + 0.1).is_err());
        assert!(delta_plus(f64::NAN, 0.1).is_err());
        assert!(delta_minus(0.5, f64::NAN).is_err());
    }

    #[test]
    fn deltas_match_angle_addition_oracle() {
        for yi in -20..=20 {
            let y = yi as f64 / 20.0;
            for ai in 0..=20 {
                let alpha = ai as f64 / 20.0 * FRAC_PI_2;
                let dp = delta_plus(y, alpha).unwrap();
                let dm = delta_minus(y, alpha).unwrap();
                assert!(
                    (dp - oracle_delta_plus(y, alpha)).abs() < 1e-12,
                    "delta_plus({y}, {alpha})"
                );
                assert!(
                    (dm - oracle_delta_minus(y, alpha)).abs() < 1e-12,
                    "delta_minus({y}, {alpha})"
                );
            }
        }
    }

    #[test]
    fn rotation_identity_holds() {
        let mut rng = SeededRng::new(5);
        for _ in 0..100 {
            let theta = rng.uniform_in(-1.5, 1.5);
            let alpha = rng.uniform_in(0.0, (FRAC_PI_2 - theta).min(FRAC_PI_2) * 0.999);
            let y = theta.sin();
            let dp = delta_plus(y, alpha).unwrap();
            assert!(((theta + alpha).sin() - (y + dp)).abs() < 1e-12);
            let sim = cosine_sim(
                &[theta.cos(), theta.sin()],
                &[(theta + alpha).cos(), (theta + alpha).sin()],
            )
            .unwrap();
            assert!((sim - alpha.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_noise_reproduces_input_exactly() {
        let e = EmbeddingBatch::from_rows(vec![vec![0.3, -0.7], vec![1.0, -1.0]]).unwrap();
        let zeros = EmbeddingBatch::from_flat(2, 2, vec![0.0; 4]).unwrap();
        let out = inject_with_noise(&e, 0.8, &zeros).unwrap();
        assert_eq!(out, e);
    }

    #[test]
    fn zero_alpha_reproduces_input_exactly() {
        let e = EmbeddingBatch::from_rows(vec![vec![0.3, -0.7], vec![0.99, -0.2]]).unwrap();
        let out = inject_plain(&e, 0.0, &mut SeededRng::new(17)).unwrap();
        assert_eq!(out, e);
    }

    #[test]
    fn unit_positive_noise_hits_upper_bound() {
        let e = EmbeddingBatch::from_flat(1, 1, vec![0.5]).unwrap();
        let xi = EmbeddingBatch::from_flat(1, 1, vec![1.0]).unwrap();
        let out = inject_with_noise(&e, std::f64::consts::FRAC_PI_6, &xi).unwrap();
        assert!((out.as_slice()[0] - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unclamped_input() {
        let e = EmbeddingBatch::from_flat(1, 2, vec![0.5, 1.2]).unwrap();
        assert!(matches!(
            inject_plain(&e, 0.1, &mut SeededRng::new(0)),
            Err(Error::UnclampedInput { .. })
        ));
    }

    #[test]
    fn plain_injection_matches_explicit_noise_form() {
        let e = EmbeddingBatch::from_rows(vec![vec![0.1, -0.4, 0.9]]).unwrap();
        let out_plain = inject_plain(&e, 0.7, &mut SeededRng::new(21)).unwrap();
        let noise = gaussian_sample(&mut SeededRng::new(21), 1, 3).unwrap();
        let out_noise = inject_with_noise(&e, 0.7, &noise).unwrap();
        assert_eq!(out_plain, out_noise);
    }

    #[test]
    fn pool_of_one_matches_single_sample() {
        let pool = build_noise_pool(&mut SeededRng::new(33), 2, 3, 1).unwrap();
        let single = gaussian_sample(&mut SeededRng::new(33), 2, 3).unwrap();
        assert_eq!(pool.len(), 1);
        assert_eq!(pool[0], single);
    }

    #[test]
    fn pool_is_deterministic_and_distinct() {
        let a = build_noise_pool(&mut SeededRng::new(4), 2, 3, 4).unwrap();
        let b = build_noise_pool(&mut SeededRng::new(4), 2, 3, 4).unwrap();
        assert_eq!(a, b);
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert_ne!(a[i], a[j]);
            }
        }
        assert!(build_noise_pool(&mut SeededRng::new(0), 2, 3, 0).is_err());
    }

    #[test]
    fn pool_of_one_equals_plain_injection() {
        let e = EmbeddingBatch::from_rows(vec![vec![0.2, -0.6], vec![0.8, 0.0]]).unwrap();
        let mut rng_a = SeededRng::new(100);
        let pool = build_noise_pool(&mut rng_a, 2, 2, 1).unwrap();
        let via_pool = inject_with_pool(&e, 0.5, &pool).unwrap();
        let via_plain = inject_plain(&e, 0.5, &mut SeededRng::new(100)).unwrap();
        assert_eq!(via_pool, via_plain);
    }

    #[test]
    fn zero_candidate_wins_every_row() {
        let e = EmbeddingBatch::from_rows(vec![vec![0.2, -0.6], vec![0.8, 0.1]]).unwrap();
        let mut rng = SeededRng::new(8);
        let mut pool = build_noise_pool(&mut rng, 2, 2, 2).unwrap();
        pool.insert(1, EmbeddingBatch::from_flat(2, 2, vec![0.0; 4]).unwrap());
        let out = inject_with_pool(&e, 0.9, &pool).unwrap();
        assert_eq!(out, e);
    }

    #[test]
    fn selected_row_dominates_every_candidate() {
        let mut rng = SeededRng::new(55);
        let raw = gaussian_sample(&mut rng, 8, 16).unwrap();
        let e = clamp_components(&raw, -1.0, 1.0).unwrap();
        let pool = build_noise_pool(&mut rng, 8, 16, 4).unwrap();
        let out = inject_with_pool(&e, 0.6, &pool).unwrap();
        let selected = batch_cosine_sim(&e, &out).unwrap();
        for cand in &pool {
            let augmented = inject_with_noise(&e, 0.6, cand).unwrap();
            let sims = batch_cosine_sim(&e, &augmented).unwrap();
            for r in 0..8 {
                assert!(selected[r] >= sims[r]);
            }
        }
    }

    #[test]
    fn controller_tightens_on_low_similarity() {
        let mut state = AngleRangeState::new(0.9, 0.01).unwrap();
        state.set_last_alpha(0.5);
        state.update(0.80);
        assert_eq!(state.lower(), 0.0);
        assert_eq!(state.upper(), 0.5);
    }

    #[test]
    fn controller_relaxes_on_high_similarity() {
        let mut state = AngleRangeState::new(0.9, 0.01).unwrap();
        state.set_last_alpha(0.5);
        state.update(0.95);
        assert_eq!(state.lower(), 0.5);
        assert_eq!(state.upper(), FRAC_PI_2);
    }

    #[test]
    fn controller_holds_inside_band() {
        let mut state = AngleRangeState::new(0.9, 0.01).unwrap();
        state.set_last_alpha(0.5);
        state.update(0.9);
        assert_eq!(state.lower(), 0.0);
        assert_eq!(state.upper(), FRAC_PI_2);
    }

    #[test]
    fn controller_resets_on_inverted_update() {
        let mut state = AngleRangeState::with_bounds(0.6, 1.0, 0.9, 0.01).unwrap();
        state.set_last_alpha(0.3);
        state.update(0.5);
        assert_eq!((state.lower(), state.upper()), (0.0, FRAC_PI_2));
    }

    #[test]
    fn controller_resets_on_width_collapse() {
        let mut state = AngleRangeState::with_bounds(0.5, 0.5 + 1e-7, 0.9, 0.01).unwrap();
        state.set_last_alpha(0.5 + 5e-8);
        state.update(0.5);
        assert_eq!((state.lower(), state.upper()), (0.0, FRAC_PI_2));
    }

    #[test]
    fn state_constructor_validates() {
        assert!(AngleRangeState::new(0.0, 0.01).is_err());
        assert!(AngleRangeState::new(1.0, 0.01).is_err());
        assert!(AngleRangeState::new(0.9, 0.0).is_err());
        assert!(AngleRangeState::new(0.9, 0.2).is_err()); // band leaves (0, 1)
        assert!(AngleRangeState::with_bounds(0.4, 0.3, 0.9, 0.01).is_err());
        assert!(AngleRangeState::with_bounds(0.0, 2.0, 0.9, 0.01).is_err());
    }

    #[test]
    fn forward_with_pinned_zero_range_is_identity() {
        let cfg = InjectorConfig {
            pool_size: 4,
            seed: 3,
            ..InjectorConfig::default()
        };
        let state = AngleRangeState::with_bounds(0.0, 0.0, 0.9, 0.01).unwrap();
        let mut inj = ArcSinInjector::with_state(cfg, state).unwrap();
        let e = EmbeddingBatch::from_rows(vec![vec![1.5, -0.2], vec![0.4, -2.0]]).unwrap();
        let out = inj.forward(&e).unwrap();
        let clamped = clamp_components(&e, -1.0, 1.0).unwrap();
        assert_eq!(out, clamped);
    }

    #[test]
    fn forward_is_deterministic_with_trace() {
        let cfg = InjectorConfig {
            seed: 9,
            ..InjectorConfig::default()
        };
        let mut a = ArcSinInjector::new(cfg.clone()).unwrap();
        let mut b = ArcSinInjector::new(cfg).unwrap();
        let mut data_rng = SeededRng::new(77);
        for _ in 0..5 {
            let raw = gaussian_sample(&mut data_rng, 6, 12).unwrap();
            let e = clamp_components(&raw, -1.0, 1.0).unwrap();
            let out_a = a.forward(&e).unwrap();
            let out_b = b.forward(&e).unwrap();
            assert_eq!(out_a, out_b);
        }
        assert_eq!(a.trace(), b.trace());
        let batches: Vec<usize> = a.trace().records().iter().map(|r| r.batch).collect();
        assert_eq!(batches, vec![0, 1, 2, 3, 4]);
    }

    proptest! {
        #[test]
        fn deviation_bounds_contain_clipped_noise(
            y in -1.0f64..=1.0,
            alpha in 0.0f64..FRAC_PI_2,
            xi in -1.0f64..=1.0,
        ) {
            let dp = delta_plus(y, alpha).unwrap();
            let dm = delta_minus(y, alpha).unwrap();
            let out = if xi >= 0.0 { y + dp * xi } else { y - dm * xi };
            prop_assert!(out >= y + dm - 1e-15);
            prop_assert!(out <= y + dp + 1e-15);
            prop_assert!((-1.0 - 1e-15..=1.0 + 1e-15).contains(&out));
        }

        #[test]
        fn deviation_bounds_in_range(y in -1.0f64..=1.0, alpha in 0.0f64..=FRAC_PI_2) {
            let dp = delta_plus(y, alpha).unwrap();
            let dm = delta_minus(y, alpha).unwrap();
            prop_assert!((0.0..=1.0 - y).contains(&dp));
            prop_assert!((-1.0 - y..=0.0).contains(&dm));
        }

        #[test]
        fn deviation_bounds_monotone_in_alpha(
            y in -1.0f64..=1.0,
            a1 in 0.0f64..=FRAC_PI_2,
            a2 in 0.0f64..=FRAC_PI_2,
        ) {
            let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
            prop_assert!(delta_plus(y, lo).unwrap() <= delta_plus(y, hi).unwrap() + 1e-15);
            prop_assert!(delta_minus(y, lo).unwrap() >= delta_minus(y, hi).unwrap() - 1e-15);
        }

        #[test]
        fn controller_bounds_stay_ordered_and_in_range(
            steps in prop::collection::vec((0.0f64..=FRAC_PI_2, -1.0f64..=1.0), 1..100),
        ) {
            let mut state = AngleRangeState::new(0.9, 0.01).unwrap();
            for (alpha, sim) in steps {
                state.set_last_alpha(alpha);
                state.update(sim);
                prop_assert!(state.lower() <= state.upper());
                prop_assert!((0.0..=FRAC_PI_2).contains(&state.lower()));
                prop_assert!((0.0..=FRAC_PI_2).contains(&state.upper()));
            }
        }
    }
}
