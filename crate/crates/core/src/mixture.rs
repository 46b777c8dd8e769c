//! CM-EM for mixtures of discretized Gaussians on a grid.
//!
//! One full iteration:
//!
//! 1. build the responsibility channel `P(y_j|x) = P(y_j)P(x|θ_j)/Q(x)`;
//! 2. iterate the weight map `P(y_j) ← Σ_i P(x_i) P(y_j|x_i)` to a fixed point;
//! 3. rebuild the channel with the new weights;
//! 4. move every component to the weighted moments under that channel.
//!
//! The run stops once `KL(P‖Q)` drops below the configured threshold. With the
//! model weights as `P(y_j)`, `R − G = KL(P‖Q)` holds exactly for any
//! parameters, which [`r_g_identity`] exposes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::prob::{
    kl_divergence, log_discretized_gaussian, log_sum_exp, renormalized, Distribution,
    JointDistribution, ShannonChannel, Support,
};

const LN2: f64 = std::f64::consts::LN_2;

/// One mixture component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub center: f64,
    pub stddev: f64,
}

/// Mixture weights `P(Y)` and component parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureParams {
    weights: Vec<f64>,
    components: Vec<Component>,
}

impl MixtureParams {
    pub fn new(weights: Vec<f64>, components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if weights.len() != components.len() {
            return Err(Error::SupportMismatch {
                left: weights.len(),
                right: components.len(),
            });
        }
        Distribution::new(Support::indices(weights.len())?, weights.clone())?;
        for c in &components {
            if !c.center.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "non-finite center {}",
                    c.center
                )));
            }
            if !(c.stddev > 0.0) || !c.stddev.is_finite() {
                return Err(Error::DegenerateWidth(c.stddev));
            }
        }
        Ok(Self {
            weights,
            components,
        })
    }

    /// From `(weight, center, stddev)` triples.
    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            triples.iter().map(|t| t.0).collect(),
            triples
                .iter()
                .map(|t| Component {
                    center: t.1,
                    stddev: t.2,
                })
                .collect(),
        )
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.center).collect()
    }

    pub fn stddevs(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.stddev).collect()
    }

    fn with_weights(&self, weights: Vec<f64>) -> Self {
        Self {
            weights,
            components: self.components.clone(),
        }
    }
}

/// Loop settings for [`cm_em_run`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CmEmSettings {
    /// Stop once `KL(P‖Q)` (bits) falls below this.
    pub stop_divergence: f64,
    pub max_iters: usize,
    pub inner_tol: f64,
    pub inner_max: usize,
    /// Smallest admissible component stddev.
    pub d_min: f64,
}

impl Default for CmEmSettings {
    fn default() -> Self {
        Self {
            stop_divergence: 1e-3,
            max_iters: 100,
            inner_tol: 1e-6,
            inner_max: 500,
            d_min: 0.5,
        }
    }
}

/// Natural-log component densities, `[j][i]`.
fn log_components(params: &MixtureParams, support: &Support) -> Result<Vec<Vec<f64>>> {
    params
        .components
        .iter()
        .map(|c| log_discretized_gaussian(support, c.center, c.stddev))
        .collect()
}

/// Natural-log joint terms `ln w_j + ln P(x_i|θ_j)` and `ln Q(x_i)`.
fn log_terms(
    params: &MixtureParams,
    logc: &[Vec<f64>],
    n: usize,
    exec: Execution,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let lw: Vec<f64> = params.weights.iter().map(|w| w.ln()).collect();
    let rows = exec.map_range(n, |i| {
        let terms: Vec<f64> = (0..lw.len()).map(|j| lw[j] + logc[j][i]).collect();
        let lq = log_sum_exp(&terms);
        (terms, lq)
    });
    rows.into_iter().unzip()
}

/// `Q(X) = Σ_j P(y_j) P(X|θ_j)`.
pub fn predicted_mixture(params: &MixtureParams, support: &Support) -> Result<Distribution> {
    let logc = log_components(params, support)?;
    let (_, lq) = log_terms(params, &logc, support.len(), Execution::Sequential);
    Distribution::new(
        support.clone(),
        renormalized(lq.iter().map(|v| v.exp()).collect()),
    )
}

/// Real-parameter joint `P(x_i, y_j) = P(y_j) P(x_i|θ_j)`.
pub fn mixture_joint(params: &MixtureParams, support: &Support) -> Result<JointDistribution> {
    let logc = log_components(params, support)?;
    let k = params.len();
    let mut m = Vec::with_capacity(support.len() * k);
    for i in 0..support.len() {
        for j in 0..k {
            m.push(params.weights[j] * logc[j][i].exp());
        }
    }
    JointDistribution::new(support.clone(), Support::indices(k)?, renormalized(m))
}

fn responsibility_rows(
    params: &MixtureParams,
    logc: &[Vec<f64>],
    support: &Support,
    exec: Execution,
) -> Result<Vec<Vec<f64>>> {
    let (terms, lq) = log_terms(params, logc, support.len(), exec);
    if let Some(i) = lq.iter().position(|v| !v.is_finite()) {
        return Err(Error::ZeroMixtureDensity { index: i });
    }
    Ok(terms
        .into_iter()
        .zip(&lq)
        .map(|(t, q)| renormalized(t.into_iter().map(|v| (v - q).exp()).collect()))
        .collect())
}

/// Responsibility channel `P(y_j|x) = P(y_j) P(x|θ_j) / Q(x)`.
pub fn e_channel(params: &MixtureParams, support: &Support) -> Result<ShannonChannel> {
    e_channel_using(params, support, Execution::default())
}

pub fn e_channel_using(
    params: &MixtureParams,
    support: &Support,
    exec: Execution,
) -> Result<ShannonChannel> {
    let logc = log_components(params, support)?;
    let rows = responsibility_rows(params, &logc, support, exec)?;
    ShannonChannel::from_rows(support.clone(), Support::indices(params.len())?, rows)
}

fn weight_map(
    params: &MixtureParams,
    logc: &[Vec<f64>],
    data: &Distribution,
    exec: Execution,
) -> Result<Vec<f64>> {
    let rows = responsibility_rows(params, logc, data.support(), exec)?;
    let mut w = vec![0.0; params.len()];
    for (row, &p) in rows.iter().zip(data.probs()) {
        for (wj, r) in w.iter_mut().zip(row) {
            *wj += p * r;
        }
    }
    Ok(renormalized(w))
}

/// Result of the weight fixed-point loop.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightUpdate {
    pub weights: Distribution,
    pub iterations: usize,
}

/// Iterates `P(y_j) ← Σ_i P(x_i) P(y_j|x_i)` with components fixed until the
/// largest weight change is below `inner_tol`. Fails with
/// [`Error::InnerNoConvergence`] after `inner_max` steps.
pub fn update_weights(
    params: &MixtureParams,
    data: &Distribution,
    inner_tol: f64,
    inner_max: usize,
) -> Result<WeightUpdate> {
    update_weights_using(params, data, inner_tol, inner_max, Execution::default())
}

pub fn update_weights_using(
    params: &MixtureParams,
    data: &Distribution,
    inner_tol: f64,
    inner_max: usize,
    exec: Execution,
) -> Result<WeightUpdate> {
    let logc = log_components(params, data.support())?;
    let ws = Support::indices(params.len())?;
    let mut cur = params.clone();
    for it in 1..=inner_max {
        let next = weight_map(&cur, &logc, data, exec)?;
        let delta = next
            .iter()
            .zip(&cur.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        cur = cur.with_weights(next);
        if delta < inner_tol {
            return Ok(WeightUpdate {
                weights: Distribution::new(ws, cur.weights)?,
                iterations: it,
            });
        }
    }
    Err(Error::InnerNoConvergence {
        iterations: inner_max,
        last: Box::new(Distribution::new(ws, cur.weights)?),
    })
}

/// Moves every component to the weighted mean and stddev of the data under
/// its responsibility column. Weights are left untouched.
pub fn m_step(
    params: &MixtureParams,
    data: &Distribution,
    responsibilities: &ShannonChannel,
    d_min: f64,
) -> Result<MixtureParams> {
    responsibilities.input().check_same(data.support())?;
    if responsibilities.n_outputs() != params.len() {
        return Err(Error::SupportMismatch {
            left: responsibilities.n_outputs(),
            right: params.len(),
        });
    }
    let xs = data.support().points();
    let mut comps = Vec::with_capacity(params.len());
    for j in 0..params.len() {
        let w: Vec<f64> = data
            .probs()
            .iter()
            .enumerate()
            .map(|(i, p)| p * responsibilities.get(i, j))
            .collect();
        let m: f64 = w.iter().sum();
        if m < 1e-12 {
            return Err(Error::DegenerateComponent {
                component: j,
                reason: format!("responsibility mass {m:e}"),
            });
        }
        let c = w.iter().zip(xs).map(|(w, x)| w * x).sum::<f64>() / m;
        let var = w
            .iter()
            .zip(xs)
            .map(|(w, x)| w * (x - c) * (x - c))
            .sum::<f64>()
            / m;
        let d = var.sqrt();
        if !(d >= d_min) {
            return Err(Error::DegenerateComponent {
                component: j,
                reason: format!("stddev {d} below {d_min}"),
            });
        }
        comps.push(Component {
            center: c,
            stddev: d,
        });
    }
    MixtureParams::new(params.weights.clone(), comps)
}

/// `R = I(X;Y)`, `G = I(X;θ)` and `KL(P‖Q)` at the given parameters, all in
/// bits. `R − G = KL` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RgIdentity {
    pub r_bits: f64,
    pub g_bits: f64,
    pub divergence_bits: f64,
}

pub fn r_g_identity(params: &MixtureParams, data: &Distribution) -> Result<RgIdentity> {
    r_g_identity_using(params, data, Execution::default())
}

fn r_g_identity_using(
    params: &MixtureParams,
    data: &Distribution,
    exec: Execution,
) -> Result<RgIdentity> {
    let support = data.support();
    let logc = log_components(params, support)?;
    let (terms, lq) = log_terms(params, &logc, support.len(), exec);
    let lw: Vec<f64> = params.weights.iter().map(|w| w.ln()).collect();
    let (mut r, mut g, mut kl) = (0.0, 0.0, 0.0);
    for (i, &p) in data.probs().iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        if !lq[i].is_finite() {
            return Err(Error::ZeroMixtureDensity { index: i });
        }
        let lp = p.ln();
        for j in 0..params.len() {
            let lr = terms[i][j] - lq[i];
            let resp = lr.exp();
            if resp > 0.0 {
                r += p * resp * (lr - lw[j]);
                g += p * resp * (logc[j][i] - lp);
            }
        }
        kl += p * (lp - lq[i]);
    }
    Ok(RgIdentity {
        r_bits: r / LN2,
        g_bits: g / LN2,
        divergence_bits: kl / LN2,
    })
}

/// `−Σ_ij P(x_i) P(y_j|x_i) log2(P(x_i|θ_j) P(y_j))` for a fixed channel.
pub fn cross_entropy(
    params: &MixtureParams,
    data: &Distribution,
    channel: &ShannonChannel,
) -> Result<f64> {
    channel.input().check_same(data.support())?;
    let logc = log_components(params, data.support())?;
    let mut h = 0.0;
    for (i, &p) in data.probs().iter().enumerate() {
        for j in 0..params.len() {
            let r = channel.get(i, j);
            if p > 0.0 && r > 0.0 {
                h -= p * r * (logc[j][i] + params.weights[j].ln());
            }
        }
    }
    Ok(h / LN2)
}

/// One row of the CM-EM trace. Record 0 holds the start parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmEmRecord {
    pub iteration: usize,
    pub params: MixtureParams,
    pub predicted: Vec<f64>,
    pub r_bits: f64,
    pub g_bits: f64,
    pub divergence_bits: f64,
    /// Weight fixed-point steps taken in this iteration.
    pub inner_iters: usize,
    pub inner_converged: bool,
    /// Cross entropy right after the parameter step, against the channel
    /// that produced it.
    pub cross_entropy_bits: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct CmEmTrace {
    pub records: Vec<CmEmRecord>,
    pub converged: bool,
}

impl CmEmTrace {
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    /// Iterations where the divergence rose by more than `tol`.
    pub fn divergence_increases(&self, tol: f64) -> Vec<usize> {
        self.records
            .windows(2)
            .filter(|w| w[1].divergence_bits > w[0].divergence_bits + tol)
            .map(|w| w[1].iteration)
            .collect()
    }
}

fn record(
    iteration: usize,
    params: &MixtureParams,
    data: &Distribution,
    inner: (usize, bool),
    cross: Option<f64>,
    exec: Execution,
) -> Result<CmEmRecord> {
    let rg = r_g_identity_using(params, data, exec)?;
    let q = predicted_mixture(params, data.support())?;
    Ok(CmEmRecord {
        iteration,
        params: params.clone(),
        predicted: q.probs().to_vec(),
        r_bits: rg.r_bits,
        g_bits: rg.g_bits,
        divergence_bits: kl_divergence(data, &q).unwrap_or(rg.divergence_bits),
        inner_iters: inner.0,
        inner_converged: inner.1,
        cross_entropy_bits: cross,
    })
}

/// Runs CM-EM from `start` against `data`. Fails with
/// [`Error::MixtureNoConvergence`] (carrying the trace) when the divergence
/// is still above the threshold after `max_iters` iterations.
///
/// When the weight loop exhausts `inner_max`, its last iterate is used and
/// the record is flagged.
pub fn cm_em_run(
    start: &MixtureParams,
    data: &Distribution,
    settings: &CmEmSettings,
) -> Result<(MixtureParams, CmEmTrace)> {
    cm_em_run_using(start, data, settings, Execution::default())
}

pub fn cm_em_run_using(
    start: &MixtureParams,
    data: &Distribution,
    settings: &CmEmSettings,
    exec: Execution,
) -> Result<(MixtureParams, CmEmTrace)> {
    let support = data.support();
    let mut trace = CmEmTrace::default();
    let mut params = start.clone();
    trace
        .records
        .push(record(0, &params, data, (0, true), None, exec)?);
    if trace.records[0].divergence_bits < settings.stop_divergence {
        trace.converged = true;
        return Ok((params, trace));
    }
    for it in 1..=settings.max_iters {
        let (weights, inner) =
            match update_weights_using(&params, data, settings.inner_tol, settings.inner_max, exec)
            {
                Ok(u) => (u.weights, (u.iterations, true)),
                Err(Error::InnerNoConvergence { iterations, last }) => (*last, (iterations, false)),
                Err(e) => return Err(e),
            };
        params = params.with_weights(weights.probs().to_vec());
        let channel = e_channel_using(&params, support, exec)?;
        params = m_step(&params, data, &channel, settings.d_min)?;
        let cross = cross_entropy(&params, data, &channel)?;
        let rec = record(it, &params, data, inner, Some(cross), exec)?;
        let done = rec.divergence_bits < settings.stop_divergence;
        trace.records.push(rec);
        if done {
            trace.converged = true;
            return Ok((params, trace));
        }
    }
    Err(Error::MixtureNoConvergence {
        iterations: settings.max_iters,
        trace: Box::new(trace),
    })
}
