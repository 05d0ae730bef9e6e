//! Canonical-path multicommodity flow and exact congestion audits.
//!
//! Between every ordered pair of states, mass `pi(a)*pi(b)` is routed
//! through the chain's transition graph along a schedule of phases: phase
//! `j` first recolors the rank-`j` vertex to its destination color
//! (consolidation), then walks the phase separator in ascending vertex
//! order, splitting the mass of each state evenly over the available colors
//! of the separator vertex (idle recolorings traverse self-loops and count
//! as steps). All interior paths have the same length; singly-flawed
//! endpoints contribute one extra repair edge on each flawed side.
//!
//! All masses are exact rationals. The audits compare the routed flow
//! against three closed forms: a per-transition bound shrinking
//! geometrically in the quantum-set size, a per-phase aggregate bound, and
//! the congestion bounds (proper-pair restricted and overall) that drive
//! the mixing-time estimate.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chain::{rational_to_f64, ChainConfig, ChainKind};
use crate::coloring::{available_colors, Coloring};
use crate::graph::{Graph, SeparatorSchedule};
use crate::space::{FlawRepairMap, StateSpace};

/// Index into a [`StateSpace`].
pub type StateIndex = usize;

/// Ordered transition `(from, to)`; equal entries mean a self-loop.
pub type Transition = (StateIndex, StateIndex);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowError {
    /// Flow analysis is defined for the single-flaw chain only.
    GlauberNotSupported,
    KMismatch { cfg_k: usize, space_k: usize },
    ScheduleMismatch { schedule_n: usize, graph_n: usize },
    /// Pair endpoints must be enumerated states.
    UnknownColoring,
    /// Pair endpoints must be proper.
    NotProper { index: StateIndex },
    /// Audits need `k >= max degree + 2`.
    InsufficientColors { k: usize, max_degree: usize },
    NoAvailableColor { vertex: usize },
    /// A propagated state left the state space (breaks the path-validity claim).
    LayerStateOutsideSpace { phase: usize, step: usize },
    /// Mass failed to converge onto the target state.
    TerminalMismatch { source: StateIndex, target: StateIndex },
    /// Ergodic flow requested for a pair that is not a transition.
    ZeroTransitionProbability { t: Transition },
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowError::GlauberNotSupported => {
                write!(f, "flow analysis applies to the single-flaw chain only")
            }
            FlowError::KMismatch { cfg_k, space_k } => {
                write!(f, "config k={cfg_k} does not match state-space k={space_k}")
            }
            FlowError::ScheduleMismatch {
                schedule_n,
                graph_n,
            } => write!(
                f,
                "schedule covers {schedule_n} vertices but the graph has {graph_n}"
            ),
            FlowError::UnknownColoring => write!(f, "coloring is not an enumerated state"),
            FlowError::NotProper { index } => {
                write!(f, "state {index} is not proper")
            }
            FlowError::InsufficientColors { k, max_degree } => write!(
                f,
                "audit requires k >= max degree + 2 (k={k}, max degree={max_degree})"
            ),
            FlowError::NoAvailableColor { vertex } => {
                write!(f, "no available color at vertex {vertex} during a split")
            }
            FlowError::LayerStateOutsideSpace { phase, step } => write!(
                f,
                "state outside the state space after step ({phase},{step})"
            ),
            FlowError::TerminalMismatch { source, target } => write!(
                f,
                "flow from {source} did not converge onto {target}"
            ),
            FlowError::ZeroTransitionProbability { t } => write!(
                f,
                "({}, {}) is not a transition of the chain",
                t.0, t.1
            ),
        }
    }
}

impl core::error::Error for FlowError {}

/// Mass per state at one layer `(phase, step)` of a pair propagation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerMass {
    pub time: (usize, usize),
    pub mass: BTreeMap<StateIndex, BigRational>,
}

impl LayerMass {
    pub fn total(&self) -> BigRational {
        self.mass.values().fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Canonical-path flow for one ordered pair of proper states.
#[derive(Debug, Clone)]
pub struct PairFlow {
    pub source: StateIndex,
    pub target: StateIndex,
    /// Total flow per transition, summed over the pair's paths and steps.
    pub edge_flow: BTreeMap<Transition, BigRational>,
    /// Flow per transition within each step `(phase, step)`.
    pub step_flow: BTreeMap<(usize, usize), BTreeMap<Transition, BigRational>>,
    /// Mass trace; the final layer of each phase coincides with layer 1 of
    /// the next phase and is recorded once, under the earlier phase's label.
    pub layers: Vec<LayerMass>,
    /// Interior path length (steps per path, self-loops included).
    pub path_len: usize,
}

fn uniform_pair_mass(space: &StateSpace) -> BigRational {
    let size = BigInt::from(space.len());
    BigRational::new(BigInt::one(), &size * &size)
}

/// Layered propagation core shared by routing and audits. Calls `visit` for
/// every traversed `(phase, step, transition, flow)` and returns the layer
/// trace. Errors if any reached state leaves the state space or the final
/// layer is not exactly the target with full mass.
fn propagate<F>(
    g: &Graph,
    sch: &SeparatorSchedule,
    space: &StateSpace,
    source: StateIndex,
    target: StateIndex,
    visit: &mut F,
) -> Result<Vec<LayerMass>, FlowError>
where
    F: FnMut(usize, usize, Transition, &BigRational),
{
    let k = space.k();
    let beta = space.state(target).clone();
    let mass0 = uniform_pair_mass(space);
    let mut current: BTreeMap<StateIndex, BigRational> =
        [(source, mass0.clone())].into_iter().collect();
    let mut layers = Vec::with_capacity(sch.total_path_len() + 1);
    layers.push(LayerMass {
        time: (1, 1),
        mass: current.clone(),
    });
    for j in 1..=g.n() {
        for l in 1..=sch.phase_steps(j) {
            let u = sch.step_vertex(j, l);
            let mut next: BTreeMap<StateIndex, BigRational> = BTreeMap::new();
            for (&i, m) in &current {
                let sigma = space.state(i);
                if l == 1 {
                    // Consolidation: all mass moves to the destination color.
                    let c = beta.color(u);
                    let tgt = if sigma.color(u) == c {
                        i
                    } else {
                        space
                            .index_of(&sigma.recolored(u, c))
                            .ok_or(FlowError::LayerStateOutsideSpace { phase: j, step: l })?
                    };
                    visit(j, l, (i, tgt), m);
                    *next.entry(tgt).or_insert_with(BigRational::zero) += m;
                } else {
                    // Split evenly over the available colors of u.
                    let avail = available_colors(g, sigma, u, k);
                    if avail.is_empty() {
                        return Err(FlowError::NoAvailableColor { vertex: u });
                    }
                    let share = m / BigRational::from_integer(BigInt::from(avail.len()));
                    for &c in &avail {
                        let tgt = if sigma.color(u) == c {
                            i
                        } else {
                            space
                                .index_of(&sigma.recolored(u, c))
                                .ok_or(FlowError::LayerStateOutsideSpace { phase: j, step: l })?
                        };
                        visit(j, l, (i, tgt), &share);
                        *next.entry(tgt).or_insert_with(BigRational::zero) += &share;
                    }
                }
            }
            current = next;
            layers.push(LayerMass {
                time: (j, l + 1),
                mass: current.clone(),
            });
        }
    }
    let converged = current.len() == 1 && current.get(&target) == Some(&mass0);
    if !converged {
        return Err(FlowError::TerminalMismatch { source, target });
    }
    Ok(layers)
}

fn check_context(
    g: &Graph,
    sch: &SeparatorSchedule,
    space: &StateSpace,
) -> Result<(), FlowError> {
    if sch.n() != g.n() {
        return Err(FlowError::ScheduleMismatch {
            schedule_n: sch.n(),
            graph_n: g.n(),
        });
    }
    let _ = space;
    Ok(())
}

/// Routes the canonical-path flow for one ordered pair of proper colorings.
pub fn route_pair_flow(
    g: &Graph,
    sch: &SeparatorSchedule,
    space: &StateSpace,
    alpha: &Coloring,
    beta: &Coloring,
) -> Result<PairFlow, FlowError> {
    check_context(g, sch, space)?;
    let source = space.index_of(alpha).ok_or(FlowError::UnknownColoring)?;
    let target = space.index_of(beta).ok_or(FlowError::UnknownColoring)?;
    for idx in [source, target] {
        if !space.is_proper_index(idx) {
            return Err(FlowError::NotProper { index: idx });
        }
    }
    let mut edge_flow: BTreeMap<Transition, BigRational> = BTreeMap::new();
    let mut step_flow: BTreeMap<(usize, usize), BTreeMap<Transition, BigRational>> =
        BTreeMap::new();
    let layers = propagate(g, sch, space, source, target, &mut |j, l, t, f| {
        *edge_flow.entry(t).or_insert_with(BigRational::zero) += f;
        *step_flow
            .entry((j, l))
            .or_default()
            .entry(t)
            .or_insert_with(BigRational::zero) += f;
    })?;
    Ok(PairFlow {
        source,
        target,
        edge_flow,
        step_flow,
        layers,
        path_len: sch.total_path_len(),
    })
}

/// Aggregate flow ledgers over all ordered state pairs.
///
/// Pairs with singly-flawed endpoints reuse the interior propagation of
/// their repaired images: a flawed source prepends the single repair edge
/// and a flawed target appends it, each adding 1 to that pair's path
/// length. Ledgers are exact; `weighted` entries accumulate flow times
/// path length, the quantity congestion divides by the ergodic flow.
#[derive(Debug, Clone)]
pub struct FlowAssignment {
    /// Interior path length shared by all pairs (before endpoint extensions).
    pub path_len: usize,
    /// Flow per transition summed over all ordered pairs.
    pub total_flow: BTreeMap<Transition, BigRational>,
    /// Flow times path length per transition, all ordered pairs.
    pub weighted_flow: BTreeMap<Transition, BigRational>,
    /// Flow times path length per transition, proper pairs only.
    pub weighted_flow_proper: BTreeMap<Transition, BigRational>,
    /// Per-phase flow aggregates over proper pairs.
    pub phase_flow: BTreeMap<(usize, Transition), BigRational>,
}

/// Routes every ordered pair and accumulates the congestion ledgers.
///
/// Interior propagation runs once per ordered pair of proper states; pairs
/// with flawed endpoints contribute through multiplicities of the repair
/// map rather than separate propagations, which keeps the cost at
/// `num_proper^2` propagations.
pub fn route_all_flows(
    g: &Graph,
    sch: &SeparatorSchedule,
    space: &StateSpace,
    repair: &FlawRepairMap,
) -> Result<FlowAssignment, FlowError> {
    check_context(g, sch, space)?;
    let len = sch.total_path_len();
    let len_big = BigInt::from(len);
    let mut total_flow: BTreeMap<Transition, BigRational> = BTreeMap::new();
    let mut weighted_flow: BTreeMap<Transition, BigRational> = BTreeMap::new();
    let mut weighted_flow_proper: BTreeMap<Transition, BigRational> = BTreeMap::new();
    let mut phase_flow: BTreeMap<(usize, Transition), BigRational> = BTreeMap::new();
    for s in 0..space.num_proper() {
        let pre_s = BigInt::from(repair.preimages(s).len());
        let cnt_s = &pre_s + 1;
        for e in 0..space.num_proper() {
            let pre_e = BigInt::from(repair.preimages(e).len());
            let cnt_e = &pre_e + 1;
            // Multiplicities over all (source, target) pairs whose repaired
            // images are (s, e): pair count, and summed path lengths
            // (interior length plus 1 per flawed endpoint).
            let w_count = &cnt_s * &cnt_e;
            let w_len = &w_count * &len_big + &pre_s * &cnt_e + &cnt_s * &pre_e;
            propagate(g, sch, space, s, e, &mut |j, _l, t, f| {
                *total_flow.entry(t).or_insert_with(BigRational::zero) += f * &w_count;
                *weighted_flow.entry(t).or_insert_with(BigRational::zero) += f * &w_len;
                *weighted_flow_proper
                    .entry(t)
                    .or_insert_with(BigRational::zero) += f * &len_big;
                *phase_flow
                    .entry((j, t))
                    .or_insert_with(BigRational::zero) += f;
            })?;
        }
    }
    // Repair edges at flawed endpoints: each flawed state pairs with every
    // state of the space, once as source (prepended edge) and once as
    // target (appended edge), always carrying the full pair mass.
    let mass0 = uniform_pair_mass(space);
    let omega = BigInt::from(space.len());
    let flawed_count = BigInt::from(space.num_singly_flawed());
    let ext_total = &mass0 * &omega;
    let ext_weighted = &mass0 * (&omega * (&len_big + 1) + &flawed_count);
    for i in space.num_proper()..space.len() {
        let s = repair.repair_target(i);
        for t in [(i, s), (s, i)] {
            *total_flow.entry(t).or_insert_with(BigRational::zero) += &ext_total;
            *weighted_flow.entry(t).or_insert_with(BigRational::zero) += &ext_weighted;
        }
    }
    Ok(FlowAssignment {
        path_len: len,
        total_flow,
        weighted_flow,
        weighted_flow_proper,
        phase_flow,
    })
}

/// Stationary mass crossing a transition: `pi(from) * P(from, to)`.
///
/// Non-loop transitions of the single-flaw chain all carry
/// `1/(|Omega| * 2kn)`; loops carry `pi` times the laziness-dominated
/// diagonal. Errors when the pair differs at more than one vertex.
pub fn ergodic_flow(
    space: &StateSpace,
    cfg: &ChainConfig,
    t: Transition,
) -> Result<BigRational, FlowError> {
    if cfg.kind != ChainKind::SingleFlaw {
        return Err(FlowError::GlauberNotSupported);
    }
    if cfg.k != space.k() {
        return Err(FlowError::KMismatch {
            cfg_k: cfg.k,
            space_k: space.k(),
        });
    }
    let (i, j) = t;
    let sigma = space.state(i);
    let n = sigma.n();
    let k = cfg.k;
    let omega = BigInt::from(space.len());
    if i != j {
        let other = space.state(j);
        let diffs = (1..=n)
            .filter(|&v| sigma.color(v) != other.color(v))
            .count();
        if diffs != 1 {
            return Err(FlowError::ZeroTransitionProbability { t });
        }
        return Ok(BigRational::new(
            BigInt::one(),
            omega * BigInt::from(2 * k * n),
        ));
    }
    // Loop: P(i,i) = 1 - (#accepted proper moves)/(2kn).
    let mut accepted = 0usize;
    for v in 1..=n {
        for c in 1..=k {
            if c != sigma.color(v) && space.index_of(&sigma.recolored(v, c)).is_some() {
                accepted += 1;
            }
        }
    }
    let p_loop = BigRational::one()
        - BigRational::new(BigInt::from(accepted), BigInt::from(2 * k * n));
    Ok(p_loop / BigRational::from_integer(omega))
}

/// Congestion of one transition: weighted flow divided by ergodic flow.
/// Transitions carrying no flow report zero without touching the chain.
pub fn edge_congestion(
    fa: &FlowAssignment,
    space: &StateSpace,
    cfg: &ChainConfig,
    t: Transition,
) -> Result<BigRational, FlowError> {
    let Some(w) = fa.weighted_flow.get(&t) else {
        return Ok(BigRational::zero());
    };
    if w.is_zero() {
        return Ok(BigRational::zero());
    }
    Ok(w / ergodic_flow(space, cfg, t)?)
}

/// One overloaded transition found by an audit.
#[derive(Debug, Clone)]
pub struct FlowViolation {
    pub pair: (StateIndex, StateIndex),
    pub phase: usize,
    pub step: usize,
    pub transition: Transition,
    pub flow: BigRational,
    pub bound: BigRational,
}

/// Result of the per-transition flow-bound audit.
///
/// For every ordered proper pair and every non-loop transition traversed
/// during step `(j, l)`, the flow must not exceed the pair mass divided by
/// `(k - max_degree)` raised to the quantum-set size at the layer the step
/// arrives at, `(j, l+1)`.
#[derive(Debug, Clone)]
pub struct TransitionFlowAudit {
    pub pairs_checked: usize,
    pub checks: u64,
    pub violations: u64,
    /// Largest flow-to-bound ratio observed (1 means the bound is tight).
    pub worst_ratio: BigRational,
    pub worst: Option<FlowViolation>,
    /// First few violations, if any.
    pub examples: Vec<FlowViolation>,
}

impl TransitionFlowAudit {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }

    /// Worst observed flow-to-bound ratio as a float.
    pub fn worst_ratio_f64(&self) -> f64 {
        rational_to_f64(&self.worst_ratio)
    }
}

const MAX_VIOLATION_EXAMPLES: usize = 16;

/// Audits the per-transition flow bound over all ordered proper pairs.
pub fn audit_transition_flow_bound(
    g: &Graph,
    sch: &SeparatorSchedule,
    space: &StateSpace,
) -> Result<TransitionFlowAudit, FlowError> {
    check_context(g, sch, space)?;
    let k = space.k();
    let d = g.max_degree();
    if k < d + 2 {
        return Err(FlowError::InsufficientColors { k, max_degree: d });
    }
    let mass0 = uniform_pair_mass(space);
    let shrink = BigInt::from(k - d);
    let mut audit = TransitionFlowAudit {
        pairs_checked: 0,
        checks: 0,
        violations: 0,
        worst_ratio: BigRational::zero(),
        worst: None,
        examples: Vec::new(),
    };
    for s in 0..space.num_proper() {
        for e in 0..space.num_proper() {
            let mut per_step: BTreeMap<(usize, usize, Transition), BigRational> =
                BTreeMap::new();
            propagate(g, sch, space, s, e, &mut |j, l, t, f| {
                if t.0 != t.1 {
                    *per_step
                        .entry((j, l, t))
                        .or_insert_with(BigRational::zero) += f;
                }
            })?;
            audit.pairs_checked += 1;
            for ((j, l, t), flow) in per_step {
                let qs = sch.quantum_set(j, l + 1).len();
                let bound = &mass0
                    / BigRational::from_integer(num_traits::pow::pow(shrink.clone(), qs));
                audit.checks += 1;
                let ratio = &flow / &bound;
                if ratio > audit.worst_ratio {
                    audit.worst_ratio = ratio.clone();
                    audit.worst = Some(FlowViolation {
                        pair: (s, e),
                        phase: j,
                        step: l,
                        transition: t,
                        flow: flow.clone(),
                        bound: bound.clone(),
                    });
                }
                if flow > bound {
                    audit.violations += 1;
                    if audit.examples.len() < MAX_VIOLATION_EXAMPLES {
                        audit.examples.push(FlowViolation {
                            pair: (s, e),
                            phase: j,
                            step: l,
                            transition: t,
                            flow,
                            bound,
                        });
                    }
                }
            }
        }
    }
    Ok(audit)
}

/// Congestion measurements and closed-form bound comparisons.
///
/// The congestion bounds use the schedule's separator width and lambda
/// ratio; for a minimal order these equal the graph's pathwidth and its
/// log ratio. Bound audits target non-loop transitions; loop congestion is
/// reported separately.
#[derive(Debug, Clone)]
pub struct CongestionReport {
    pub num_states: usize,
    pub num_proper: usize,
    pub k: usize,
    pub max_degree: usize,
    pub vsn: usize,
    pub lambda: f64,
    pub path_len: usize,
    /// Largest non-loop congestion over all pairs, with its transition.
    pub rho_max: BigRational,
    pub rho_max_transition: Option<Transition>,
    /// Largest non-loop congestion restricted to proper pairs.
    pub rho_proper_max: BigRational,
    pub rho_proper_transition: Option<Transition>,
    /// Largest self-loop congestion (informational; not bound-audited).
    pub rho_loop_max: Option<(Transition, BigRational)>,
    /// Worst per-phase aggregate flow relative to its bound, and the count
    /// of phase/transition combinations over the bound.
    pub phase_worst_ratio: BigRational,
    pub phase_violations: u64,
    /// Closed-form congestion bound for the proper-pair restriction.
    pub proper_congestion_bound: f64,
    /// Closed-form congestion bound over all pairs.
    pub total_congestion_bound: f64,
}

impl CongestionReport {
    pub fn phase_bound_pass(&self) -> bool {
        self.phase_violations == 0
    }

    pub fn proper_bound_pass(&self) -> bool {
        rational_to_f64(&self.rho_proper_max) <= self.proper_congestion_bound
    }

    pub fn total_bound_pass(&self) -> bool {
        rational_to_f64(&self.rho_max) <= self.total_congestion_bound
    }

    pub fn pass(&self) -> bool {
        self.phase_bound_pass() && self.proper_bound_pass() && self.total_bound_pass()
    }

    /// Bound-to-measurement slack for the all-pairs congestion bound.
    pub fn total_slack(&self) -> f64 {
        self.total_congestion_bound / rational_to_f64(&self.rho_max)
    }

    /// Bound-to-measurement slack for the proper-pair congestion bound.
    pub fn proper_slack(&self) -> f64 {
        self.proper_congestion_bound / rational_to_f64(&self.rho_proper_max)
    }

    /// All-pairs congestion maximum as a float.
    pub fn rho_max_f64(&self) -> f64 {
        rational_to_f64(&self.rho_max)
    }

    /// Proper-pair congestion maximum as a float.
    pub fn rho_proper_max_f64(&self) -> f64 {
        rational_to_f64(&self.rho_proper_max)
    }

    /// Largest self-loop congestion as a float, if any loop carries flow.
    pub fn rho_loop_max_f64(&self) -> Option<f64> {
        self.rho_loop_max.as_ref().map(|(_, r)| rational_to_f64(r))
    }

    /// Worst per-phase flow-to-bound ratio as a float.
    pub fn phase_worst_ratio_f64(&self) -> f64 {
        rational_to_f64(&self.phase_worst_ratio)
    }
}

fn ratio_pow(num: usize, den: usize, e: usize) -> BigRational {
    let base = BigRational::new(BigInt::from(num), BigInt::from(den));
    num_traits::pow::pow(base, e)
}

/// Routes all flows and audits the per-phase and congestion bounds.
pub fn audit_flow_bounds(
    g: &Graph,
    sch: &SeparatorSchedule,
    space: &StateSpace,
    repair: &FlawRepairMap,
) -> Result<CongestionReport, FlowError> {
    check_context(g, sch, space)?;
    let k = space.k();
    let d = g.max_degree();
    if k < d + 2 {
        return Err(FlowError::InsufficientColors { k, max_degree: d });
    }
    let n = g.n();
    let fa = route_all_flows(g, sch, space, repair)?;
    let cfg = ChainConfig {
        kind: ChainKind::SingleFlaw,
        k,
    };
    // Non-loop ergodic flow is one constant; congestion maximization can
    // scan the weighted ledgers directly.
    let q_nonloop = BigRational::new(
        BigInt::one(),
        BigInt::from(space.len()) * BigInt::from(2 * k * n),
    );
    let mut rho_max = BigRational::zero();
    let mut rho_max_transition = None;
    for (t, w) in &fa.weighted_flow {
        if t.0 == t.1 {
            continue;
        }
        let rho = w / &q_nonloop;
        if rho > rho_max {
            rho_max = rho;
            rho_max_transition = Some(*t);
        }
    }
    let mut rho_proper_max = BigRational::zero();
    let mut rho_proper_transition = None;
    for (t, w) in &fa.weighted_flow_proper {
        if t.0 == t.1 {
            continue;
        }
        let rho = w / &q_nonloop;
        if rho > rho_proper_max {
            rho_proper_max = rho;
            rho_proper_transition = Some(*t);
        }
    }
    let mut rho_loop_max: Option<(Transition, BigRational)> = None;
    for (t, w) in &fa.weighted_flow {
        if t.0 != t.1 {
            continue;
        }
        let rho = w / ergodic_flow(space, &cfg, *t)?;
        if rho_loop_max.as_ref().map_or(true, |(_, best)| &rho > best) {
            rho_loop_max = Some((*t, rho));
        }
    }
    // Per-phase aggregate bound: pair mass times the proper count, divided
    // by the shrink ratio to the power of twice the phase separator size.
    let mass0 = uniform_pair_mass(space);
    let proper_big = BigRational::from_integer(BigInt::from(space.num_proper()));
    let mut phase_worst_ratio = BigRational::zero();
    let mut phase_violations = 0u64;
    for ((j, t), f) in &fa.phase_flow {
        if t.0 == t.1 {
            continue;
        }
        let s_j = sch.separator(*j).len();
        let bound = &mass0 * &proper_big * ratio_pow(k, k - d, 2 * s_j);
        let ratio = f / &bound;
        if ratio > phase_worst_ratio {
            phase_worst_ratio = ratio;
        }
        if f > &bound {
            phase_violations += 1;
        }
    }
    let nf = n as f64;
    let kf = k as f64;
    let lambda = sch.lambda();
    let ratio_f = kf / (k - d) as f64;
    let width_factor = num_traits::Float::powi(ratio_f, 2 * sch.vsn() as i32);
    let log_n = num_traits::Float::log2(nf);
    let proper_congestion_bound =
        2.0 * kf * (lambda + 1.0) * num_traits::Float::powi(nf, 3) * log_n * width_factor;
    let total_congestion_bound = 8.0
        * num_traits::Float::powi(kf, 3)
        * (lambda + 1.0)
        * num_traits::Float::powi(nf, 5)
        * log_n
        * width_factor;
    Ok(CongestionReport {
        num_states: space.len(),
        num_proper: space.num_proper(),
        k,
        max_degree: d,
        vsn: sch.vsn(),
        lambda,
        path_len: fa.path_len,
        rho_max,
        rho_max_transition,
        rho_proper_max,
        rho_proper_transition,
        rho_loop_max,
        phase_worst_ratio,
        phase_violations,
        proper_congestion_bound,
        total_congestion_bound,
    })
}
