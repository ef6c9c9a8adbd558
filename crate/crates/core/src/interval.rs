//! The interval calculus over an order-ideal `N_f`: membership in `L_f`
//! and `I_f(h)`, property (C) witnesses, compact approximation, sup
//! realization, complement splitting and restriction maps.
//!
//! Sup functions are either ordinary piecewise-linear functions or
//! oscillating tails; every decision below is exact. Near 0 everything
//! reduces to germ arithmetic: a function strictly dominates another on a
//! punctured right-neighbourhood of 0 exactly when its germ `(lam, mu)`
//! is lexicographically larger.

use crate::monoid::{
    alg_leq, in_m, in_nf, leq, positive_linear_window, sliver, sliver_bound, IdealCtx, MElem,
    NfRejection,
};
use crate::monster::{pwl_le_tail_on, tail_le_pwl_on, TailFn, TailSide};
use crate::pwl::{compare, Germ, PwlFn};
use crate::rat::Rat;
use crate::rset::{Interval, RSet};
use crate::urysohn::urysohn;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("g is not in N_f: {0}")]
    NotInIdeal(NfRejection),
    #[error("the three I_f(h) characterizations disagree: {0}")]
    Disagreement(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("sup function not supported here: {0}")]
    Unsupported(String),
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
}

/// A sup function over `U_f`: the candidate members of `L_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupFn {
    Pwl(PwlFn),
    Tail(TailFn),
}

impl SupFn {
    pub fn constant(c: Rat) -> SupFn {
        SupFn::Pwl(PwlFn::constant(c))
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        match self {
            SupFn::Pwl(p) => p.eval(t),
            SupFn::Tail(g) => g.eval(t),
        }
    }

    /// Germ at 0; `None` when the function oscillates all the way to 0.
    pub fn germ(&self) -> Option<Germ> {
        match self {
            SupFn::Pwl(p) => Some(p.germ()),
            SupFn::Tail(g) => g.germ(),
        }
    }

    pub fn is_nonneg_on(&self, s: &RSet) -> bool {
        match self {
            SupFn::Pwl(p) => compare(&PwlFn::constant(Rat::zero()), p, s).leq,
            SupFn::Tail(g) => g.is_nonneg(),
        }
    }

    pub fn sup_bound(&self) -> Rat {
        match self {
            SupFn::Pwl(p) => p.max_value(),
            SupFn::Tail(g) => g.sup_bound(),
        }
    }

    /// `self <= p` (strict when asked) over `s`.
    pub fn le_pwl_on(&self, p: &PwlFn, s: &RSet, strict: bool) -> bool {
        match self {
            SupFn::Pwl(q) => {
                let rep = compare(q, p, s);
                if strict {
                    rep.strict
                } else {
                    rep.leq
                }
            }
            SupFn::Tail(g) => tail_le_pwl_on(g, p, s, strict),
        }
    }

    /// `x <= self` over `s`.
    pub fn ge_pwl_on(&self, x: &PwlFn, s: &RSet) -> bool {
        match self {
            SupFn::Pwl(q) => compare(x, q, s).leq,
            SupFn::Tail(g) => pwl_le_tail_on(x, g, s),
        }
    }

    /// An explicit function agreeing with `self` exactly on `[0, b]`.
    pub fn exact_pwl_up_to(&self, b: &Rat) -> PwlFn {
        match self {
            SupFn::Pwl(p) => p.clone(),
            SupFn::Tail(g) => {
                assert!(
                    g.side() == TailSide::Left,
                    "local expansion only for left-accumulating tails"
                );
                g.expand_up_to(b)
            }
        }
    }

    /// Upper end usable for local expansions: 1 for ordinary functions,
    /// anything strictly below the accumulation point for tails.
    fn expansion_ceiling(&self, t: &Rat) -> Option<Rat> {
        match self {
            SupFn::Pwl(_) => Some(Rat::one()),
            SupFn::Tail(g) => {
                if g.is_trivial() {
                    Some(Rat::one())
                } else if g.side() == TailSide::Left {
                    if t < g.accum() {
                        Some(g.accum().clone())
                    } else {
                        Some(Rat::one())
                    }
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for SupFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupFn::Pwl(p) => write!(f, "{p}"),
            SupFn::Tail(g) => write!(f, "{g}"),
        }
    }
}

impl Serialize for SupFn {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            SupFn::Pwl(p) => p.serialize(serializer),
            SupFn::Tail(g) => g.serialize(serializer),
        }
    }
}

/// Outcome of the `L_f` membership test.
#[derive(Debug, Clone)]
pub enum LfOutcome {
    /// The zero function, a member with no witness.
    Zero,
    /// A nonzero member together with `z` in `N_f^*`, `z <= h` on `U_f`.
    Witness(MElem),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LfRejection {
    #[error("h vanishes identically near 0 (on (0,{0}]) without being zero")]
    VanishesNearZero(Rat),
    #[error("h dips below every linear germ toward 0: window values {0:?}")]
    SublinearDecay(Vec<(Rat, Rat)>),
    #[error("h has recurrent zeros accumulating at 0 (first at t={0})")]
    RecurrentZeros(Rat),
    #[error("h is negative on U_f")]
    Negative,
}

/// Decide `h ∈ L_f` and produce the witness `z ∈ N_f^*` with `z <= h` on
/// `U_f`. The canonical witness is `nu * (f0 ∧ c)` scaled to fit under
/// `h`, falling back to a tent supported near 0 when `h` has interior
/// zeros; `h` itself is preferred when it already lies in `N_f`.
pub fn in_lf(h: &SupFn, ctx: &IdealCtx) -> Result<LfOutcome, LfRejection> {
    let u = ctx.u_f();
    if !h.is_nonneg_on(u) {
        return Err(LfRejection::Negative);
    }
    match h {
        SupFn::Pwl(p) => {
            if p.is_zero_fn() {
                return Ok(LfOutcome::Zero);
            }
            let germ = p.germ();
            if !germ.is_positive_near_zero() {
                // h >= 0 with nonpositive germ means h = 0 on [0, w]
                let w = positive_window_of_zero_run(p);
                return Err(LfRejection::VanishesNearZero(w));
            }
            // h itself, when it lies in N_f
            if let Ok(m) = in_m(p) {
                if in_nf(&m, ctx).is_ok() {
                    return Ok(LfOutcome::Witness(verify_lf_witness(m, h, ctx)));
                }
            }
            // nu * (f0 ∧ c) over the whole of U_f
            for k in 0..6 {
                let c = Rat::new(1, 1 << k);
                let q = PwlFn::identity().meet(&PwlFn::constant(c));
                if let Some(nu) = min_ratio_over(p, &q, u) {
                    if nu.is_positive() {
                        let z = in_m(&q.scale(&nu)).expect("scaled cap is in M");
                        if in_nf(&z, ctx).is_ok() {
                            return Ok(LfOutcome::Witness(verify_lf_witness(z, h, ctx)));
                        }
                    }
                }
            }
            // tent supported inside the germ window
            let z = tent_witness_under_germ(&germ, ctx);
            Ok(LfOutcome::Witness(verify_lf_witness(z, h, ctx)))
        }
        SupFn::Tail(g) => {
            if g.is_trivial() {
                return in_lf(&SupFn::Pwl(g.base().clone()), ctx);
            }
            match g.side() {
                TailSide::Left => {
                    let germ = g.germ().expect("left tails have a germ");
                    if !germ.is_positive_near_zero() {
                        return Err(LfRejection::VanishesNearZero(germ.eps));
                    }
                    let mut germ = germ;
                    germ.eps = germ.eps.min(g.zone_lo().clone());
                    let z = tent_witness_under_germ(&germ, ctx);
                    let fits = pwl_le_tail_on(z.func(), g, u);
                    assert!(fits, "tent witness sits under the tail prefix");
                    Ok(LfOutcome::Witness(z))
                }
                TailSide::Right => {
                    if !g.zone_lo().is_zero() {
                        return in_lf(&SupFn::Pwl(g.base().clone()), ctx);
                    }
                    if g.alternate() {
                        // zero plateaus accumulate at 0
                        return Err(LfRejection::RecurrentZeros(g.plateau_end(2)));
                    }
                    let two_ratio = g.hi_ratio().clone() * Rat::int(2);
                    if two_ratio < Rat::one() || g.hi0().is_zero() {
                        // window value over abscissa collapses: no linear
                        // germ fits below h
                        let pairs = (1..=4)
                            .map(|n| {
                                let t = g.plateau_end(2 * n);
                                let v = g.eval(&t);
                                (t, v)
                            })
                            .collect();
                        return Err(LfRejection::SublinearDecay(pairs));
                    }
                    // envelope fit: nu * node(n) <= plateau(n+1) for all n,
                    // monotone in n because 2*ratio >= 1, so n = 1 decides
                    let span = g.zone_hi() - g.zone_lo();
                    let nu = &(g.hi0() * g.hi_ratio()) / &span;
                    let nu = Rat::midpoint(&Rat::zero(), &nu);
                    let c = Rat::midpoint(&Rat::zero(), g.zone_hi());
                    let z_fn = sliver(&nu, &c);
                    let z = in_m(&z_fn).expect("sliver is in M");
                    let cert = in_nf(&z, ctx);
                    assert!(cert.is_ok(), "sliver witness lies in N_f");
                    // parameter-level domination: on window n the tail is at
                    // least plateau(n+1) and the witness at most nu*node(n)
                    for n in 1..=3u32 {
                        let bound = &nu * &g.node(n);
                        assert!(bound <= g.plateau_value(n + 1));
                    }
                    Ok(LfOutcome::Witness(z))
                }
            }
        }
    }
}

fn positive_window_of_zero_run(p: &PwlFn) -> Rat {
    for iv in p.zero_set().intervals() {
        if iv.lo.is_zero() && iv.hi.is_positive() {
            return iv.hi.clone();
        }
    }
    p.germ().eps
}

/// Exact minimum of `h/q` over `s` for `q >= 0`; `None` when `q` vanishes
/// somewhere on `s` that `h` does not cover, or the ratio has no positive
/// lower bound. Both functions are piecewise linear, so the ratio is a
/// Möbius function on each merged segment and extremal at endpoints;
/// toward 0 the limit is read from the germs.
fn min_ratio_over(h: &PwlFn, q: &PwlFn, s: &RSet) -> Option<Rat> {
    let mut xs: Vec<Rat> = h.breakpoints().cloned().collect();
    xs.extend(q.breakpoints().cloned());
    for iv in s.closure().intervals() {
        xs.push(iv.lo.clone());
        xs.push(iv.hi.clone());
    }
    xs.sort();
    xs.dedup();
    let closure = s.closure();
    let mut best: Option<Rat> = None;
    for x in xs {
        if !closure.contains(&x) {
            continue;
        }
        let qv = q.eval(&x);
        let hv = h.eval(&x);
        if qv.is_zero() {
            if x.is_zero() {
                // germ limit of h/q as t -> 0+
                let (gh, gq) = (h.germ(), q.germ());
                if gq.mu.is_positive() && gq.lam.is_zero() {
                    if gh.lam.is_positive() {
                        continue; // ratio blows up, no constraint
                    }
                    let lim = &gh.mu / &gq.mu;
                    if best.as_ref().map(|b| &lim < b).unwrap_or(true) {
                        best = Some(lim);
                    }
                    continue;
                }
                return None;
            }
            if hv.is_positive() {
                continue; // ratio unbounded above here, no constraint
            }
            return None; // q = 0 with h = 0: nothing positive fits
        }
        let ratio = &hv / &qv;
        if best.as_ref().map(|b| &ratio < b).unwrap_or(true) {
            best = Some(ratio);
        }
    }
    best
}

/// Tent witness `nu * (f0 ∧ cut)` supported inside the germ window of a
/// sup function with a positive germ.
fn tent_witness_under_germ(germ: &Germ, ctx: &IdealCtx) -> MElem {
    let f_window = positive_linear_window(ctx.f().func())
        .expect("context elements are positive near 0");
    let germ_line = PwlFn::constant(germ.lam.clone()).add(&PwlFn::identity().scale(&germ.mu));
    let h_window = positive_linear_window(&germ_line)
        .map(|w| w.min(germ.eps.clone()))
        .expect("positive germ");
    let c = Rat::midpoint(&Rat::zero(), &f_window.min(h_window));
    // min of (lam + mu t)/t over (0, c]: the limit mu when lam = 0, else
    // attained at t = c
    let nu = if germ.lam.is_zero() {
        germ.mu.clone()
    } else {
        germ.value_at(&c) / c.clone()
    };
    let z = sliver(&Rat::midpoint(&Rat::zero(), &nu), &c);
    in_m(&z).expect("tent witness is in M")
}

fn verify_lf_witness(z: MElem, h: &SupFn, ctx: &IdealCtx) -> MElem {
    assert!(!z.is_zero());
    assert!(in_nf(&z, ctx).is_ok(), "lf witness must lie in N_f");
    assert!(
        h.ge_pwl_on(z.func(), ctx.u_f()),
        "lf witness must sit below h on U_f"
    );
    z
}

/// Verdict of the three equivalent `I_f(h)` characterizations, each
/// decided by its own construction.
#[derive(Debug, Clone)]
pub struct IfhVerdict {
    pub member: bool,
    pub original: bool,
    pub tilde: bool,
    pub prime: bool,
    /// Witness `z` with `g <_M z <= h` when membership holds.
    pub witness: Option<MElem>,
}

/// Decide `g ∈ I_f(h)` by evaluating the original definition, the
/// tilde form and the prime form independently, then checking that all
/// three agree.
pub fn in_ifh(g: &MElem, ctx: &IdealCtx, h: &SupFn) -> Result<IfhVerdict, IntervalError> {
    in_nf(g, ctx).map_err(IntervalError::NotInIdeal)?;
    if g.is_zero() {
        return Ok(IfhVerdict {
            member: true,
            original: true,
            tilde: true,
            prime: true,
            witness: None,
        });
    }
    let germ_h = h.germ().ok_or_else(|| {
        IntervalError::Unsupported("sup function has no germ at 0".into())
    })?;
    let germ_g = g.germ();
    let below = h.ge_pwl_on(g.func(), ctx.u_f());
    let germ_room = germ_g.strictly_below(&germ_h);

    // original: z with g <_M z, z ≪ h near 0, z <= h on U_f
    let original = if below && germ_room {
        strict_lift(g, &germ_g, &germ_h, h, ctx).is_some()
    } else {
        false
    };
    // tilde: g <= h and g ≪ g' ≪ h near 0 for some g' in N_f
    let tilde = if below && germ_room {
        tilde_intermediate(g, &germ_g, &germ_h, ctx).is_some()
    } else {
        false
    };
    // prime: z in N_f with g <_M z <= h on U_f
    let (prime, witness) = if below && germ_room {
        match strict_lift(g, &germ_g, &germ_h, h, ctx) {
            Some(z) => (true, Some(z)),
            None => (false, None),
        }
    } else {
        (false, None)
    };

    if original != tilde || tilde != prime {
        return Err(IntervalError::Disagreement(format!(
            "original={original} tilde={tilde} prime={prime} for g={} h={}",
            g.func(),
            h
        )));
    }
    Ok(IfhVerdict { member: original, original, tilde, prime, witness })
}

/// Construct `z = g + sliver` with `g <_M z`, `z ≪ h` near 0 and
/// `z <= h` on `U_f`; the sliver fits inside the germ margin.
fn strict_lift(
    g: &MElem,
    germ_g: &Germ,
    germ_h: &Germ,
    h: &SupFn,
    ctx: &IdealCtx,
) -> Option<MElem> {
    let margin = germ_margin_sliver(germ_g, germ_h, h, g.func());
    let (nu, c) = margin?;
    let w = sliver(&nu, &c);
    let z_fn = g.func().add(&w);
    let z = in_m(&z_fn).ok()?;
    if !h.ge_pwl_on(z.func(), ctx.u_f()) {
        return None;
    }
    if in_nf(&z, ctx).is_err() {
        return None;
    }
    let diff = alg_leq(g, &z).ok()?;
    if diff.is_zero() {
        return None;
    }
    if !z.germ().strictly_below(germ_h) {
        return None;
    }
    Some(z)
}

/// An intermediate `g'` with `g ≪ g' ≪ h` on a punctured neighbourhood
/// of 0, `g'` in `N_f`.
fn tilde_intermediate(
    g: &MElem,
    germ_g: &Germ,
    germ_h: &Germ,
    ctx: &IdealCtx,
) -> Option<MElem> {
    let margin_line = germ_line(germ_h).sub(&germ_line(germ_g));
    let w = positive_linear_window(&margin_line)?;
    let c = w
        .min(germ_g.eps.clone())
        .min(germ_h.eps.clone());
    let c = Rat::midpoint(&Rat::zero(), &c);
    let nu = sliver_bound(&margin_line, &c);
    let gp_fn = g.func().add(&sliver(&nu, &c));
    let gp = in_m(&gp_fn).ok()?;
    if in_nf(&gp, ctx).is_err() {
        return None;
    }
    // g ≪ g' on (0, c/2] and g' ≪ h near 0 by the germ margin
    (gp.germ().strictly_below(germ_h) && germ_g.strictly_below(&gp.germ())).then_some(gp)
}

fn germ_line(g: &Germ) -> PwlFn {
    PwlFn::constant(g.lam.clone()).add(&PwlFn::identity().scale(&g.mu))
}

/// Sliver parameters fitting strictly inside the pointwise gap between
/// `germ_g` and `germ_h` near 0, small enough that `g + sliver <= h`
/// holds on the sliver support.
fn germ_margin_sliver(
    germ_g: &Germ,
    germ_h: &Germ,
    h: &SupFn,
    _g: &PwlFn,
) -> Option<(Rat, Rat)> {
    let margin_line = germ_line(germ_h).sub(&germ_line(germ_g));
    let w = positive_linear_window(&margin_line)?;
    let mut c = w.min(germ_g.eps.clone()).min(germ_h.eps.clone());
    if let SupFn::Tail(t) = h {
        if !t.is_trivial() && t.side() == TailSide::Left {
            c = c.min(t.zone_lo().clone());
        }
    }
    let c = Rat::midpoint(&Rat::zero(), &c);
    let nu = sliver_bound(&margin_line, &c);
    Some((nu, c))
}

/// Upward directedness of `I_f(h)`: a common upper bound `g''` of two
/// members that stays inside the interval. Follows the lattice word
/// `g'' = (1/2)((g' - g1) ∧ r) + g1 ∨ g2` with `r` a Urysohn cut near 0.
pub fn upward_direct(
    g1: &MElem,
    g2: &MElem,
    ctx: &IdealCtx,
    h: &SupFn,
) -> Result<MElem, IntervalError> {
    upward_direct_capped(g1, g2, ctx, h, None)
}

pub(crate) fn upward_direct_capped(
    g1: &MElem,
    g2: &MElem,
    ctx: &IdealCtx,
    h: &SupFn,
    support_cap: Option<&Rat>,
) -> Result<MElem, IntervalError> {
    let m1 = in_ifh(g1, ctx, h)?;
    let m2 = in_ifh(g2, ctx, h)?;
    if !(m1.member && m2.member) {
        return Err(IntervalError::Precondition(
            "both inputs must lie in I_f(h)".into(),
        ));
    }
    // order by germ so that the larger one leads the construction
    let (a, b, va) = if g2.germ().strictly_below(&g1.germ()) || g1.germ() == g2.germ() {
        (g1, g2, m1)
    } else {
        (g2, g1, m2)
    };
    if b.is_zero() {
        // directedness with a zero member: the witness lift of a works
        let out = va.witness.unwrap_or_else(|| a.clone());
        let verdict = in_ifh(&out, ctx, h)?;
        if !verdict.member {
            return Err(IntervalError::VerificationFailed(
                "witness lift left the interval".into(),
            ));
        }
        return Ok(out);
    }
    let gp = va.witness.clone().expect("nonzero member carries a witness");
    let step = gp.func().sub(a.func());
    // window where a dominates b pointwise and the step is linear positive
    let mut e = step
        .germ()
        .eps
        .min(a.germ().eps)
        .min(b.germ().eps)
        .min(positive_linear_window(&step).ok_or_else(|| {
            IntervalError::VerificationFailed("witness step has positive germ".into())
        })?);
    // a >= b near 0 as germ lines: shrink below any crossing
    let diff_line = germ_line(&a.germ()).sub(&germ_line(&b.germ()));
    if let Some(w) = positive_linear_window(&diff_line) {
        e = e.min(w);
    }
    if let Some(cap) = support_cap {
        e = e.min(cap.clone());
    }
    let e = Rat::midpoint(&Rat::zero(), &e);
    let cap_height = step.max_value() + Rat::one();
    let k = RSet::interval(Interval::closed(Rat::zero(), Rat::midpoint(&Rat::zero(), &e)));
    let v = RSet::interval(Interval::new(Rat::zero(), e.clone(), true, false));
    let r = urysohn(&k, &v, &cap_height).expect("cut is well nested");
    let clipped = step.meet(&r);
    let upper = a.func().join(b.func());
    let gpp_fn = clipped.scale(&Rat::new(1, 2)).add(&upper);
    let gpp = in_m(&gpp_fn)
        .map_err(|e| IntervalError::VerificationFailed(format!("g'' not in M: {e}")))?;

    if alg_leq(g1, &gpp).is_err() || alg_leq(g2, &gpp).is_err() {
        return Err(IntervalError::VerificationFailed(
            "g'' fails to dominate the inputs".into(),
        ));
    }
    let verdict = in_ifh(&gpp, ctx, h)?;
    if !verdict.member {
        return Err(IntervalError::VerificationFailed(
            "g'' left the interval".into(),
        ));
    }
    Ok(gpp)
}

/// A replayable property-(C) witness: for each `t` in `U_f \ {0}` it
/// produces `z_t` in `N_f` with `z_t <= h` on `U_f`, `z_t = h` near `t`,
/// and `z_t ≪ h` near 0.
#[derive(Debug, Clone)]
pub enum PropCWitness {
    /// Built from the lf-witness and Urysohn localizations.
    Direct { ctx: IdealCtx, h: SupFn, lf: MElem },
    /// For `h` given by an element of `N_f` itself: localize by shaving a
    /// sliver near 0.
    NElem { ctx: IdealCtx, elem: MElem },
    /// Witness for a difference `minuend - subtrahend` assembled from the
    /// two inputs' witnesses.
    Difference {
        minuend: Box<PropCWitness>,
        subtrahend: Box<PropCWitness>,
        diff: PwlFn,
        lf: MElem,
    },
}

/// One replay of a property-(C) witness.
#[derive(Debug, Clone)]
pub struct PropCAt {
    pub z_t: MElem,
    pub window: RSet,
}

impl PropCWitness {
    pub fn ctx(&self) -> &IdealCtx {
        match self {
            PropCWitness::Direct { ctx, .. } | PropCWitness::NElem { ctx, .. } => ctx,
            PropCWitness::Difference { minuend, .. } => minuend.ctx(),
        }
    }

    pub fn sup(&self) -> SupFn {
        match self {
            PropCWitness::Direct { h, .. } => h.clone(),
            PropCWitness::NElem { elem, .. } => SupFn::Pwl(elem.func().clone()),
            PropCWitness::Difference { diff, .. } => SupFn::Pwl(diff.clone()),
        }
    }

    /// Produce and fully verify the local witness at `t`.
    pub fn witness_at(&self, t: &Rat) -> Result<PropCAt, IntervalError> {
        let ctx = self.ctx().clone();
        if t.is_zero() || !ctx.u_f().contains(t) {
            return Err(IntervalError::Precondition(format!(
                "t={t} is not in U_f minus the base point"
            )));
        }
        let out = match self {
            PropCWitness::Direct { ctx, h, lf } => {
                let window = local_window(h, ctx, t)?;
                let z_t = matching_element(ctx, h, lf, &window_set(t, &window))?;
                PropCAt { z_t, window: open_window(t, &window) }
            }
            PropCWitness::NElem { ctx, elem } => {
                // shave a sliver supported strictly left of the window
                let d = window_radius_for_point(elem.func(), ctx, t)?;
                let c = Rat::midpoint(&Rat::zero(), &(t - &d));
                let germ = elem.germ();
                let line = germ_line(&germ);
                let w = positive_linear_window(&line).ok_or_else(|| {
                    IntervalError::Unsupported("N_f sup element with flat germ".into())
                })?;
                let c = c.min(Rat::midpoint(&Rat::zero(), &w));
                let nu = sliver_bound(&line, &c);
                let z_fn = elem.func().sub(&sliver(&nu, &c));
                let z_t = in_m(&z_fn).map_err(|e| {
                    IntervalError::VerificationFailed(format!("shaved element: {e}"))
                })?;
                PropCAt { z_t, window: open_window(t, &d) }
            }
            PropCWitness::Difference { minuend, subtrahend, diff: _, lf } => {
                let wa = minuend.witness_at(t)?;
                let wz = subtrahend.witness_at(t)?;
                let window = wa.window.intersect(&wz.window);
                let (lo, hi) = window_bounds(&window, t)?;
                let quarter = Rat::midpoint(t, &Rat::midpoint(t, &lo));
                let quarter_hi = Rat::midpoint(t, &Rat::midpoint(t, &hi));
                let inner = RSet::interval(Interval::closed(quarter, quarter_hi));
                let step = wa.z_t.func().sub(wz.z_t.func());
                let cap = step.max_value() + Rat::one();
                let r = urysohn(&inner, &window, &cap)
                    .map_err(|e| IntervalError::VerificationFailed(e.to_string()))?;
                let d_fn = PwlFn::constant(Rat::zero()).join(&step.meet(&r));
                let v_fn = lf.func().scale(&Rat::new(1, 2));
                let e_fn = d_fn.join(&v_fn);
                let z_t = in_m(&e_fn).map_err(|e| {
                    IntervalError::VerificationFailed(format!("difference witness: {e}"))
                })?;
                PropCAt { z_t, window: inner.interior() }
            }
        };
        self.verify_at(t, &out)?;
        Ok(out)
    }

    /// Exact re-check of the three witness conditions.
    fn verify_at(&self, t: &Rat, at: &PropCAt) -> Result<(), IntervalError> {
        let ctx = self.ctx();
        let h = self.sup();
        let fail = |msg: String| Err(IntervalError::VerificationFailed(msg));
        if in_nf(&at.z_t, ctx).is_err() {
            return fail(format!("witness at {t} is not in N_f"));
        }
        if !h.ge_pwl_on(at.z_t.func(), ctx.u_f()) {
            return fail(format!("witness at {t} exceeds h somewhere on U_f"));
        }
        let w = at.window.intersect(ctx.u_f());
        if !w.contains(t) {
            return fail(format!("window does not contain {t}"));
        }
        // z_t = h on the window
        let local_hi = match &h {
            SupFn::Pwl(p) => p.clone(),
            SupFn::Tail(g) => g.expand_up_to(&upper_probe(&w)),
        };
        let c1 = compare(at.z_t.func(), &local_hi, &w);
        let c2 = compare(&local_hi, at.z_t.func(), &w);
        if !(c1.leq && c2.leq) {
            return fail(format!("witness at {t} does not match h on its window"));
        }
        // z_t ≪ h near 0: germ strictness
        let germ_h = h.germ().ok_or_else(|| {
            IntervalError::Unsupported("sup function has no germ".into())
        })?;
        if !at.z_t.germ().strictly_below(&germ_h) {
            return fail(format!("witness at {t} is not strictly below h near 0"));
        }
        Ok(())
    }
}

fn open_window(t: &Rat, d: &Rat) -> RSet {
    let lo = (t - d).max(Rat::zero());
    let hi = (t + d).min(Rat::one());
    RSet::interval(Interval::open(lo, hi))
}

fn window_set(t: &Rat, d: &Rat) -> RSet {
    let lo = (t - d).max(Rat::zero());
    let hi = (t + d).min(Rat::one());
    RSet::interval(Interval::closed(lo, hi))
}

fn window_bounds(w: &RSet, t: &Rat) -> Result<(Rat, Rat), IntervalError> {
    for iv in w.intervals() {
        if iv.contains(t) {
            return Ok((iv.lo.clone(), iv.hi.clone()));
        }
    }
    Err(IntervalError::VerificationFailed(format!(
        "no window component contains {t}"
    )))
}

fn upper_probe(w: &RSet) -> Rat {
    w.max().cloned().unwrap_or_else(Rat::one)
}

/// Radius such that `(t - d, t + d)` stays inside the `U_f` component of
/// `t`, clear of 0, and clear of a tail's accumulation point.
fn window_radius_for_point(
    h_local: &PwlFn,
    ctx: &IdealCtx,
    t: &Rat,
) -> Result<Rat, IntervalError> {
    let comp = ctx
        .u_f()
        .intervals()
        .iter()
        .find(|iv| iv.contains(t))
        .ok_or_else(|| IntervalError::Precondition(format!("{t} outside U_f")))?;
    let mut d = (t - &comp.lo).min(&comp.hi - t).min(t.clone());
    if d.is_zero() {
        // t sits on a closed component endpoint; step inward instead
        d = (&comp.hi - &comp.lo).min(t.clone());
    }
    let mut d = Rat::midpoint(&Rat::zero(), &Rat::midpoint(&Rat::zero(), &d));
    for bx in h_local.breakpoints() {
        if bx != t {
            let gap = (bx - t).abs();
            if gap.is_positive() {
                d = d.min(Rat::midpoint(&Rat::zero(), &gap));
            }
        }
    }
    Ok(d)
}

fn local_window(h: &SupFn, ctx: &IdealCtx, t: &Rat) -> Result<Rat, IntervalError> {
    let ceiling = h.expansion_ceiling(t);
    let mut d = match &ceiling {
        Some(c) if c > t => Rat::midpoint(&Rat::zero(), &Rat::midpoint(&Rat::zero(), &(c - t))),
        _ => Rat::new(1, 4),
    };
    let comp = ctx
        .u_f()
        .intervals()
        .iter()
        .find(|iv| iv.contains(t))
        .ok_or_else(|| IntervalError::Precondition(format!("{t} outside U_f")))?;
    let inward = (t - &comp.lo).min(&comp.hi - t).min(t.clone());
    if inward.is_positive() {
        d = d.min(Rat::midpoint(&Rat::zero(), &Rat::midpoint(&Rat::zero(), &inward)));
    } else {
        d = d.min(Rat::midpoint(
            &Rat::zero(),
            &Rat::midpoint(&Rat::zero(), &(&comp.hi - &comp.lo)),
        ));
    }
    // clear the local breakpoints of h
    let probe_hi = (t + &d).min(Rat::one());
    let local = h.exact_pwl_up_to(&probe_hi.max(t.clone()));
    for bx in local.points().iter().map(|(x, _)| x) {
        if bx != t {
            let gap = (bx - t).abs();
            if gap.is_positive() {
                d = d.min(Rat::midpoint(&Rat::zero(), &gap));
            }
        }
    }
    Ok(d)
}

/// The matching element for a closed target set: equal to `h` on the
/// target, dominated by `h` on `U_f`, strictly below `h` near 0. This is
/// `(1/2)(z ∧ r') + h ∧ r` with `r` a plateau over the target and `r'` a
/// cut near 0.
fn matching_element(
    ctx: &IdealCtx,
    h: &SupFn,
    lf: &MElem,
    target: &RSet,
) -> Result<MElem, IntervalError> {
    if target.is_empty() {
        return Ok(MElem::zero());
    }
    let m = target.min().cloned().expect("non-empty target");
    if !m.is_positive() || !target.is_subset_of(ctx.u_f()) {
        return Err(IntervalError::Precondition(format!(
            "target {target} must be compact inside U_f"
        )));
    }
    // expansion region: past the target but below any accumulation point
    let top = target.max().cloned().expect("non-empty target");
    let bound = match h {
        SupFn::Tail(g) if !g.is_trivial() && g.side() == TailSide::Left && &top < g.accum() => {
            Some(g.accum().clone())
        }
        _ => None,
    };
    // open collar around the target, inside U_f, away from 0 and the bound
    let v = ctx.u_f().intersect(&RSet::interval(Interval::new(
        Rat::midpoint(&Rat::zero(), &m),
        match &bound {
            Some(b) => Rat::midpoint(&top, b),
            None => Rat::one(),
        },
        false,
        bound.is_none(),
    )));
    if !target.is_subset_of(&v) {
        return Err(IntervalError::Precondition(format!(
            "target {target} has no open collar inside U_f"
        )));
    }
    let probe = upper_probe(&v);
    let h_local = h.exact_pwl_up_to(&probe);
    let cap = h_local.max_over(&v).map(|(_, y)| y).unwrap_or_else(Rat::zero) + Rat::one();
    let r = urysohn(&target.closure(), &v, &cap)
        .map_err(|e| IntervalError::VerificationFailed(e.to_string()))?;
    let patch = h_local.meet(&r);
    // near-0 part, supported strictly left of the collar
    let c = Rat::midpoint(&Rat::zero(), &Rat::midpoint(&Rat::zero(), &m));
    let k0 = RSet::interval(Interval::closed(Rat::zero(), Rat::midpoint(&Rat::zero(), &c)));
    let v0 = RSet::interval(Interval::new(Rat::zero(), c, true, false));
    let r0 = urysohn(&k0, &v0, &(lf.func().max_value() + Rat::one()))
        .map_err(|e| IntervalError::VerificationFailed(e.to_string()))?;
    let near = lf.func().meet(&r0).scale(&Rat::new(1, 2));
    let z_fn = near.add(&patch.join(&PwlFn::constant(Rat::zero())));
    in_m(&z_fn).map_err(|e| IntervalError::VerificationFailed(format!("matching element: {e}")))
}

/// Obstruction to property (C).
#[derive(Debug, Clone, thiserror::Error)]
pub enum PropCObstruction {
    #[error("h is not in L_f: {0}")]
    NotInLf(LfRejection),
    #[error("h is the zero function; property (C) is vacuous")]
    ZeroSup,
}

/// Build the property-(C) witness for `h` over `ctx`. For the
/// representable sup functions here the only obstruction is failing
/// `L_f` membership itself: on `U_f` the context element is positive, so
/// the local germ of `h` at any `t` is dominated by a multiple of `f`.
pub fn has_property_c(ctx: &IdealCtx, h: &SupFn) -> Result<PropCWitness, PropCObstruction> {
    match in_lf(h, ctx) {
        Err(rej) => Err(PropCObstruction::NotInLf(rej)),
        Ok(LfOutcome::Zero) => Err(PropCObstruction::ZeroSup),
        Ok(LfOutcome::Witness(lf)) => Ok(PropCWitness::Direct {
            ctx: ctx.clone(),
            h: h.clone(),
            lf,
        }),
    }
}

/// Property-(C) witness for `h - g` from witnesses of `g` and `h`, for
/// `g <= h` with `h - g` in `L_f` and nonzero.
pub fn sub_has_c(
    ctx: &IdealCtx,
    g_witness: &PropCWitness,
    h_witness: &PropCWitness,
) -> Result<PropCWitness, IntervalError> {
    let g_sup = g_witness.sup();
    let h_sup = h_witness.sup();
    let (gp, hp) = match (&g_sup, &h_sup) {
        (SupFn::Pwl(a), SupFn::Pwl(b)) => (a.clone(), b.clone()),
        _ => {
            return Err(IntervalError::Unsupported(
                "difference witnesses require piecewise-linear sup functions".into(),
            ))
        }
    };
    if gp.is_zero_fn() {
        // subtracting nothing: the minuend witness stands
        return Ok(h_witness.clone());
    }
    let diff = hp.sub(&gp);
    if !compare(&PwlFn::constant(Rat::zero()), &diff, ctx.u_f()).leq {
        return Err(IntervalError::Precondition("g must sit below h on U_f".into()));
    }
    let lf = match in_lf(&SupFn::Pwl(diff.clone()), ctx) {
        Ok(LfOutcome::Witness(z)) => z,
        Ok(LfOutcome::Zero) => {
            return Err(IntervalError::Precondition("h - g must be nonzero".into()))
        }
        Err(e) => return Err(IntervalError::Precondition(format!("h - g not in L_f: {e}"))),
    };
    Ok(PropCWitness::Difference {
        minuend: Box::new(h_witness.clone()),
        subtrahend: Box::new(g_witness.clone()),
        diff,
        lf,
    })
}

/// The approximation lemma: an element of `I_f(h)` equal to `h` exactly
/// on the compact `K ⊆ U_f`, optionally dominating a given `v ∈ I_f(h)`.
pub fn approx_on_compact(
    ctx: &IdealCtx,
    witness: &PropCWitness,
    k: &RSet,
    v: Option<&MElem>,
) -> Result<MElem, IntervalError> {
    let h = witness.sup();
    if !k.is_subset_of(ctx.u_f()) {
        return Err(IntervalError::Precondition(format!(
            "K={k} is not contained in U_f"
        )));
    }
    if !k.is_relatively_closed() {
        return Err(IntervalError::Precondition(format!("K={k} is not compact")));
    }
    let lf = match in_lf(&h, ctx) {
        Ok(LfOutcome::Witness(z)) => z,
        Ok(LfOutcome::Zero) => MElem::zero(),
        Err(e) => return Err(IntervalError::Precondition(format!("h not in L_f: {e}"))),
    };
    let z0 = if k.is_empty() {
        MElem::zero()
    } else {
        matching_element(ctx, &h, &lf, &k.closure())?
    };
    let z = match v {
        None => z0,
        Some(v) => {
            if v.is_zero() {
                z0
            } else {
                let cap = k.min().cloned().map(|m| Rat::midpoint(&Rat::zero(), &m));
                upward_direct_capped(&z0, v, ctx, &h, cap.as_ref())?
            }
        }
    };
    // postconditions: z in I_f(h) and z = h exactly on K
    let verdict = in_ifh(&z, ctx, &h)?;
    if !verdict.member {
        return Err(IntervalError::VerificationFailed(
            "approximation left the interval".into(),
        ));
    }
    if !k.is_empty() {
        let local = h.exact_pwl_up_to(&upper_probe(k));
        let c1 = compare(z.func(), &local, k);
        let c2 = compare(&local, z.func(), k);
        if !(c1.leq && c2.leq) {
            return Err(IntervalError::VerificationFailed(
                "approximation does not match h on K".into(),
            ));
        }
    }
    Ok(z)
}

/// Realize the sup: an element of `I_f(h)` whose value at `t` exceeds
/// `h(t) - eps`. Follows `g = (1/4)(z ∧ r') ∨ r` with a plateau `r`
/// slightly below `h` near `t`.
pub fn realize_sup(
    ctx: &IdealCtx,
    h: &SupFn,
    t: &Rat,
    eps: &Rat,
) -> Result<MElem, IntervalError> {
    if !eps.is_positive() {
        return Err(IntervalError::Precondition("eps must be positive".into()));
    }
    if !ctx.u_f().contains(t) {
        return Err(IntervalError::Precondition(format!("{t} is not in U_f")));
    }
    let ht = h.eval(t);
    if !ht.is_positive() {
        return Err(IntervalError::Precondition(format!("h({t}) must be positive")));
    }
    let lf = match in_lf(h, ctx) {
        Ok(LfOutcome::Witness(z)) => z,
        Ok(LfOutcome::Zero) => {
            return Err(IntervalError::Precondition("h is zero".into()))
        }
        Err(e) => return Err(IntervalError::Precondition(format!("h not in L_f: {e}"))),
    };
    let m = eps.clone().min(ht.clone());
    let plateau = &ht - &Rat::midpoint(&Rat::zero(), &m);
    // shrink the window until h stays above the plateau on the whole
    // collar that will carry the Urysohn ramp
    let mut d = local_window(h, ctx, t)?;
    let (window, collar) = loop {
        let w = window_set(t, &d);
        let (lo, hi) = window_bounds(&w, t)?;
        let two_d = &d + &d;
        let ceiling = upper_collar_limit(h, &hi);
        let collar_hi = if &(&hi + &two_d) < &ceiling {
            &hi + &two_d
        } else {
            Rat::midpoint(&hi, &ceiling)
        };
        // at the space edge the collar closes over 1 and stays
        // relatively open
        let hi_closed = collar_hi == Rat::one();
        let collar = RSet::interval(Interval::new(
            (&lo - &two_d).max(Rat::zero()),
            collar_hi,
            false,
            hi_closed,
        ))
        .intersect(ctx.u_f());
        let local = h.exact_pwl_up_to(&upper_probe(&collar));
        let min_h = local.min_over(&collar).expect("collar non-empty").1;
        if min_h > plateau && w.is_subset_of(&collar) {
            break (w, collar);
        }
        d = Rat::midpoint(&Rat::zero(), &d);
    };
    let (lo, _hi) = window_bounds(&window, t)?;
    let r = urysohn(&window, &collar, &plateau)
        .map_err(|e| IntervalError::VerificationFailed(e.to_string()))?;
    let c = Rat::midpoint(&Rat::zero(), &Rat::midpoint(&Rat::zero(), &lo));
    let k0 = RSet::interval(Interval::closed(Rat::zero(), Rat::midpoint(&Rat::zero(), &c)));
    let v0 = RSet::interval(Interval::new(Rat::zero(), c, true, false));
    let r0 = urysohn(&k0, &v0, &(lf.func().max_value() + Rat::one()))
        .map_err(|e| IntervalError::VerificationFailed(e.to_string()))?;
    let g_fn = lf.func().meet(&r0).scale(&Rat::new(1, 4)).join(&r);
    let g = in_m(&g_fn)
        .map_err(|e| IntervalError::VerificationFailed(format!("realized element: {e}")))?;
    let verdict = in_ifh(&g, ctx, h)?;
    if !verdict.member {
        return Err(IntervalError::VerificationFailed(
            "realized element left the interval".into(),
        ));
    }
    let achieved = g.func().eval(t);
    if !(&achieved > &(&ht - eps)) {
        return Err(IntervalError::VerificationFailed(format!(
            "value {achieved} at {t} does not exceed h(t) - eps"
        )));
    }
    Ok(g)
}

fn upper_collar_limit(h: &SupFn, hi: &Rat) -> Rat {
    match h {
        SupFn::Tail(g) if !g.is_trivial() && g.side() == TailSide::Left && hi < g.accum() => {
            g.accum().clone()
        }
        _ => Rat::one(),
    }
}

/// Report of a complement split.
#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub op: &'static str,
    pub recombines: bool,
    #[serde(rename = "g1_in_I")]
    pub g1_in_i: bool,
    #[serde(rename = "g2_in_I")]
    pub g2_in_i: bool,
}

/// Split `g ∈ nD_f` as `g1 + g2` with `g1 ∈ I_f(h)` and
/// `g2 ∈ I_f(n·1 - h)`, given the uniform gap `n·1 - h >= eps` on `U_f`.
/// Follows the level-set construction: cut `g` below the gap with a
/// Urysohn cap, add a small germ element near 0, approximate `h` and the
/// remainder sup on the high-level set, and finish with one Riesz split.
pub fn complement_split(
    ctx: &IdealCtx,
    h_witness: &PropCWitness,
    n: u32,
    g: &MElem,
    eps: &Rat,
) -> Result<(MElem, MElem, SplitReport), IntervalError> {
    let h = match h_witness.sup() {
        SupFn::Pwl(p) => p,
        SupFn::Tail(_) => {
            return Err(IntervalError::Unsupported(
                "complement splitting needs a piecewise-linear sup".into(),
            ))
        }
    };
    if !eps.is_positive() {
        return Err(IntervalError::Precondition("gap eps must be positive".into()));
    }
    let n_one = PwlFn::constant(Rat::int(n as i64));
    let gap_fn = n_one.sub(&h);
    let gap = compare(&PwlFn::constant(eps.clone()), &gap_fn, ctx.u_f());
    if !gap.leq {
        return Err(IntervalError::Precondition(format!(
            "n*1 - h is not >= {eps} on U_f"
        )));
    }
    // preconditions: g in N_f with g <=_M n*1
    in_nf(g, ctx).map_err(IntervalError::NotInIdeal)?;
    if alg_leq(g, &in_m(&n_one).expect("constants are in M")).is_err() {
        return Err(IntervalError::Precondition(format!(
            "g is not below {n}*1 in the algebraic order"
        )));
    }
    if g.is_zero() {
        let report =
            SplitReport { op: "complement_split", recombines: true, g1_in_i: true, g2_in_i: true };
        return Ok((MElem::zero(), MElem::zero(), report));
    }

    let delta = eps / &Rat::int(3);
    let third = &delta / &Rat::int(3);
    let half = &delta / &Rat::int(2);
    let k1 = g.func().level_set_le(&third);
    let k2 = g.func().level_set_ge(&half);
    let k3 = g.func().level_set_ge(&third).intersect(ctx.u_f());

    // Urysohn cap a: rho_a on K2, zero on K1
    let rho_a = &Rat::int(n as i64) - &Rat::midpoint(&Rat::zero(), &delta);
    let a = if k2.is_empty() {
        PwlFn::constant(Rat::zero())
    } else {
        urysohn(&k2, &k1.complement(), &rho_a)
            .map_err(|e| IntervalError::VerificationFailed(e.to_string()))?
    };
    let g_low = g.func().meet(&n_one.sub(&a));
    // g_low = g on K1 and g_low < delta everywhere
    debug_assert!(compare(&g_low, g.func(), &RSet::full()).leq);

    // small element near 0 below g_low, supported off K3
    let germ_window = positive_linear_window(g.func())
        .ok_or_else(|| IntervalError::VerificationFailed("g has a positive germ".into()))?;
    let mut c4 = germ_window;
    if let Some(m3) = k3.min() {
        c4 = c4.min(Rat::midpoint(&Rat::zero(), m3));
    }
    let k4 = RSet::interval(Interval::closed(
        Rat::zero(),
        Rat::midpoint(&Rat::zero(), &c4),
    ));
    let v4 = RSet::interval(Interval::new(Rat::zero(), c4.clone(), true, false));
    let r4 = urysohn(&k4, &v4, &(g.func().max_value() + Rat::one()))
        .map_err(|e| IntervalError::VerificationFailed(e.to_string()))?;
    let v_small = in_m(&g.func().meet(&r4).scale(&Rat::new(1, 2)))
        .map_err(|e| IntervalError::VerificationFailed(format!("near-0 element: {e}")))?;

    let g_high = in_m(&g.func().sub(&g_low).add(v_small.func()))
        .map_err(|e| IntervalError::VerificationFailed(format!("g'' not in M: {e}")))?;

    // sup for the complementary side after removing g_low
    let h_low_witness = PropCWitness::NElem {
        ctx: ctx.clone(),
        elem: in_m(&g_low)
            .map_err(|e| IntervalError::VerificationFailed(format!("g' not in M: {e}")))?,
    };
    let n1_witness = has_property_c(ctx, &SupFn::constant(Rat::int(n as i64)))
        .map_err(|e| IntervalError::Precondition(e.to_string()))?;
    let nh_witness = sub_has_c(ctx, h_witness, &n1_witness)?;
    let hp_witness = sub_has_c(ctx, &h_low_witness, &nh_witness)?;

    let z1 = approx_on_compact(ctx, h_witness, &k3, None)?;
    let z2 = approx_on_compact(ctx, &hp_witness, &k3, Some(&v_small))?;

    // the paper's bound g'' <=_M z1 + z2
    let z_sum = z1.add(&z2);
    if alg_leq(&g_high, &z_sum).is_err() {
        return Err(IntervalError::VerificationFailed(
            "g'' is not dominated by z1 + z2".into(),
        ));
    }
    let (g1, g3) = crate::monoid::riesz_decompose(&g_high, &z1, &z2)
        .map_err(|e| IntervalError::VerificationFailed(e.to_string()))?;
    let g2 = in_m(&g3.func().add(&g_low).sub(v_small.func()))
        .map_err(|e| IntervalError::VerificationFailed(format!("g2 not in M: {e}")))?;

    // verify the full postcondition set
    let recombines = g1.func().add(g2.func()) == *g.func();
    let g1_in = in_ifh(&g1, ctx, &SupFn::Pwl(h.clone()))?.member;
    let g2_in = in_ifh(&g2, ctx, &SupFn::Pwl(n_one.sub(&h)))?.member;
    let report = SplitReport {
        op: "complement_split",
        recombines,
        g1_in_i: g1_in,
        g2_in_i: g2_in,
    };
    if !(recombines && g1_in && g2_in) {
        return Err(IntervalError::VerificationFailed(format!(
            "complement split postconditions: {report:?}"
        )));
    }
    Ok((g1, g2, report))
}

/// A complemented interval representative: context, sup function, its
/// `L_f` witness and a property-(C) witness.
#[derive(Debug, Clone)]
pub struct IntervalRep {
    pub ctx: IdealCtx,
    pub h: SupFn,
    pub lf_witness: MElem,
    pub propc: PropCWitness,
}

impl IntervalRep {
    /// Build and verify a representative over a context with `f <=_M f0`.
    pub fn new(ctx: IdealCtx, h: SupFn) -> Result<IntervalRep, IntervalError> {
        if !ctx.is_below_f0() {
            return Err(IntervalError::Precondition(
                "interval contexts require f <=_M f0".into(),
            ));
        }
        let lf_witness = match in_lf(&h, &ctx) {
            Ok(LfOutcome::Witness(z)) => z,
            Ok(LfOutcome::Zero) => {
                return Err(IntervalError::Precondition("zero sup function".into()))
            }
            Err(e) => return Err(IntervalError::Precondition(format!("h not in L_f: {e}"))),
        };
        let propc = has_property_c(&ctx, &h)
            .map_err(|e| IntervalError::Precondition(e.to_string()))?;
        Ok(IntervalRep { ctx, h, lf_witness, propc })
    }
}

/// Commutativity report for a restriction: at each grid point the
/// restricted context realizes the restricted sup values.
#[derive(Debug, Clone, Serialize)]
pub struct RestrictReport {
    pub grid_points: usize,
    pub realized: usize,
    pub commutes: bool,
}

/// Restrict an interval representative to a smaller context
/// `f' <=_M f`, returning the new representative and the grid report
/// checking that sup realization through the restricted context still
/// attains the restricted sup values.
pub fn restrict_interval(
    ctx_new: &IdealCtx,
    rep: &IntervalRep,
    eps: &Rat,
) -> Result<(IntervalRep, RestrictReport), IntervalError> {
    if leq(ctx_new.f(), rep.ctx.f()) == false {
        return Err(IntervalError::Precondition(
            "restriction requires f' <=_M f".into(),
        ));
    }
    // the restricted lf witness: z ∧ f' lies in N_{f'}* and under h
    let z_new_fn = rep.lf_witness.func().meet(ctx_new.f().func());
    let z_new = in_m(&z_new_fn)
        .map_err(|e| IntervalError::VerificationFailed(format!("restricted witness: {e}")))?;
    in_nf(&z_new, ctx_new).map_err(IntervalError::NotInIdeal)?;
    if !rep.h.ge_pwl_on(z_new.func(), ctx_new.u_f()) {
        return Err(IntervalError::VerificationFailed(
            "restricted witness exceeds h".into(),
        ));
    }
    let propc = has_property_c(ctx_new, &rep.h)
        .map_err(|e| IntervalError::Precondition(e.to_string()))?;
    let new_rep = IntervalRep {
        ctx: ctx_new.clone(),
        h: rep.h.clone(),
        lf_witness: z_new,
        propc,
    };
    // grid: midpoints and quartiles of each component of U_{f'}
    let mut grid_points = 0usize;
    let mut realized = 0usize;
    for iv in ctx_new.u_f().intervals() {
        for frac in [Rat::new(1, 4), Rat::new(1, 2), Rat::new(3, 4)] {
            let t = &iv.lo + &(&(&iv.hi - &iv.lo) * &frac);
            if !ctx_new.u_f().contains(&t) {
                continue;
            }
            if let SupFn::Tail(g) = &rep.h {
                if !g.is_trivial() && &t >= g.accum() && g.side() == TailSide::Left {
                    continue;
                }
            }
            if !rep.h.eval(&t).is_positive() {
                continue;
            }
            grid_points += 1;
            if let Ok(g) = realize_sup(ctx_new, &rep.h, &t, eps) {
                if &g.func().eval(&t) > &(&rep.h.eval(&t) - eps) {
                    realized += 1;
                }
            }
        }
    }
    let report = RestrictReport {
        grid_points,
        realized,
        commutes: grid_points == realized,
    };
    Ok((new_rep, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::in_m;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn f0_ctx() -> IdealCtx {
        IdealCtx::f0_ctx()
    }

    fn one_sup() -> SupFn {
        SupFn::constant(Rat::one())
    }

    #[test]
    fn in_lf_examples() {
        let ctx = f0_ctx();
        // h = 1: the canonical witness is f0 = 1 * (f0 ∧ 1)
        match in_lf(&one_sup(), &ctx).unwrap() {
            LfOutcome::Witness(z) => assert_eq!(z.func(), &PwlFn::identity()),
            LfOutcome::Zero => panic!(),
        }
        // h = f0: h itself lies in N_f, so z = h
        match in_lf(&SupFn::Pwl(PwlFn::identity()), &ctx).unwrap() {
            LfOutcome::Witness(z) => assert_eq!(z.func(), &PwlFn::identity()),
            LfOutcome::Zero => panic!(),
        }
        // h = 0 is a member without witness
        assert!(matches!(
            in_lf(&SupFn::constant(Rat::zero()), &ctx),
            Ok(LfOutcome::Zero)
        ));
        // h vanishing near 0 is rejected
        let late = PwlFn::constant(Rat::zero())
            .join(&PwlFn::identity().sub(&PwlFn::constant(r(1, 2))));
        assert!(matches!(
            in_lf(&SupFn::Pwl(late), &ctx),
            Err(LfRejection::VanishesNearZero(_))
        ));
    }

    #[test]
    fn in_lf_rejects_superlinear_tail() {
        use crate::monster::{TailFn, TailSide};
        let ctx = f0_ctx();
        let base = PwlFn::from_points(vec![
            (Rat::zero(), Rat::zero()),
            (r(1, 2), r(1, 8)),
            (Rat::one(), r(1, 8)),
        ])
        .unwrap();
        let g = TailFn::new(
            base.clone(),
            Rat::zero(),
            r(1, 2),
            TailSide::Right,
            r(1, 8),
            r(1, 4),
            false,
        )
        .unwrap();
        assert!(matches!(
            in_lf(&SupFn::Tail(g), &ctx),
            Err(LfRejection::SublinearDecay(_))
        ));
        // ratio 1/2 keeps a linear germ underneath: accepted
        let ok = TailFn::new(
            base,
            Rat::zero(),
            r(1, 2),
            TailSide::Right,
            r(1, 8),
            r(1, 2),
            false,
        )
        .unwrap();
        assert!(matches!(
            in_lf(&SupFn::Tail(ok), &ctx),
            Ok(LfOutcome::Witness(_))
        ));
    }

    #[test]
    fn in_ifh_examples() {
        let ctx = f0_ctx();
        let h = one_sup();
        // zero belongs to every interval
        let v = in_ifh(&MElem::zero(), &ctx, &h).unwrap();
        assert!(v.member && v.original && v.tilde && v.prime);
        // half of the lf witness is inside, with a strict lift
        let half = in_m(&PwlFn::identity().scale(&r(1, 2))).unwrap();
        let v = in_ifh(&half, &ctx, &h).unwrap();
        assert!(v.member);
        let z = v.witness.unwrap();
        assert!(crate::monoid::lt(&half, &z));
        // g = h = f0: no strict room above g under h
        let f0m = MElem::f0();
        let v = in_ifh(&f0m, &ctx, &SupFn::Pwl(PwlFn::identity())).unwrap();
        assert!(!v.member && !v.original && !v.tilde && !v.prime);
    }

    #[test]
    fn ifh_hereditary() {
        let ctx = f0_ctx();
        let h = one_sup();
        let g = in_m(&PwlFn::identity().scale(&r(1, 2))).unwrap();
        assert!(in_ifh(&g, &ctx, &h).unwrap().member);
        // anything below g in the algebraic order stays inside
        let smaller = in_m(&g.func().scale(&r(1, 3))).unwrap();
        assert!(crate::monoid::leq(&smaller, &g));
        assert!(in_ifh(&smaller, &ctx, &h).unwrap().member);
    }

    #[test]
    fn upward_direct_examples() {
        let ctx = f0_ctx();
        let h = one_sup();
        let a = in_m(&PwlFn::identity().scale(&r(1, 2))).unwrap();
        // equal inputs
        let g = upward_direct(&a, &a, &ctx, &h).unwrap();
        assert!(crate::monoid::leq(&a, &g));
        assert!(in_ifh(&g, &ctx, &h).unwrap().member);
        // zero input
        let g = upward_direct(&MElem::zero(), &a, &ctx, &h).unwrap();
        assert!(crate::monoid::leq(&a, &g));
        // two incomparable small elements under h = 1
        let bump = in_m(
            &PwlFn::identity()
                .scale(&r(1, 4))
                .meet(&PwlFn::constant(r(1, 8))),
        )
        .unwrap();
        let slope = in_m(&PwlFn::identity().scale(&r(1, 3))).unwrap();
        let g = upward_direct(&bump, &slope, &ctx, &h).unwrap();
        assert!(crate::monoid::leq(&bump, &g));
        assert!(crate::monoid::leq(&slope, &g));
        assert!(in_ifh(&g, &ctx, &h).unwrap().member);
    }

    #[test]
    fn property_c_replays() {
        let ctx = f0_ctx();
        let w = has_property_c(&ctx, &one_sup()).unwrap();
        for t in [r(1, 3), r(1, 2), r(9, 10), r(1, 64)] {
            let at = w.witness_at(&t).unwrap();
            assert!(at.window.contains(&t));
            // z_t matches h = 1 at t itself
            assert_eq!(at.z_t.func().eval(&t), Rat::one());
        }
        // t = 0 is excluded
        assert!(w.witness_at(&Rat::zero()).is_err());
    }

    #[test]
    fn approx_examples() {
        let ctx = f0_ctx();
        let w = has_property_c(&ctx, &one_sup()).unwrap();
        // z = 1 exactly on K = [1/4, 1/2]
        let k: RSet = "{[1/4,1/2]}".parse().unwrap();
        let z = approx_on_compact(&ctx, &w, &k, None).unwrap();
        for t in [r(1, 4), r(3, 8), r(1, 2)] {
            assert_eq!(z.func().eval(&t), Rat::one());
        }
        // singleton compact
        let k1 = RSet::point(r(1, 3));
        let z = approx_on_compact(&ctx, &w, &k1, None).unwrap();
        assert_eq!(z.func().eval(&r(1, 3)), Rat::one());
        // augmentation dominates v
        let v = in_m(&PwlFn::identity().scale(&r(1, 2))).unwrap();
        let z = approx_on_compact(&ctx, &w, &k, Some(&v)).unwrap();
        assert!(crate::monoid::leq(&v, &z));
        for t in [r(1, 4), r(1, 2)] {
            assert_eq!(z.func().eval(&t), Rat::one());
        }
        // v = 0 reduces to the plain case
        let z0 = approx_on_compact(&ctx, &w, &k, Some(&MElem::zero())).unwrap();
        assert!(in_ifh(&z0, &ctx, &one_sup()).unwrap().member);
        // K outside U_f is rejected
        let bad = RSet::point(Rat::zero());
        assert!(approx_on_compact(&ctx, &w, &bad, None).is_err());
    }

    #[test]
    fn realize_sup_examples() {
        let ctx = f0_ctx();
        // h = 1 at t = 1/2 within 1/8
        let g = realize_sup(&ctx, &one_sup(), &r(1, 2), &r(1, 8)).unwrap();
        assert!(g.func().eval(&r(1, 2)) >= r(7, 8));
        // huge eps still yields a valid interval element
        let g = realize_sup(&ctx, &one_sup(), &r(1, 2), &Rat::int(5)).unwrap();
        assert!(in_ifh(&g, &ctx, &one_sup()).unwrap().member);
        // close to 0 under h = f0
        let h = SupFn::Pwl(PwlFn::identity());
        let g = realize_sup(&ctx, &h, &r(1, 64), &r(1, 128)).unwrap();
        assert!(&g.func().eval(&r(1, 64)) > &(&r(1, 64) - &r(1, 128)));
    }

    #[test]
    fn sup_additivity_at_realization_level() {
        let ctx = f0_ctx();
        let h1 = one_sup();
        let h2 = SupFn::Pwl(PwlFn::identity());
        let (t, eps) = (r(1, 2), r(1, 8));
        let half = Rat::midpoint(&Rat::zero(), &eps);
        let g1 = realize_sup(&ctx, &h1, &t, &half).unwrap();
        let g2 = realize_sup(&ctx, &h2, &t, &half).unwrap();
        let sum_at_t = g1.func().eval(&t) + g2.func().eval(&t);
        let target = &(&h1.eval(&t) + &h2.eval(&t)) - &eps;
        assert!(sum_at_t > target);
    }

    #[test]
    fn sub_has_c_examples() {
        let ctx = f0_ctx();
        let one_w = has_property_c(&ctx, &one_sup()).unwrap();
        // g = 0: the minuend witness stands
        let zero_w = PropCWitness::NElem { ctx: ctx.clone(), elem: MElem::zero() };
        let w = sub_has_c(&ctx, &zero_w, &one_w);
        assert!(w.is_err() || matches!(w, Ok(PropCWitness::Direct { .. })));
        // g = 1/2: a witness for the constant 1/2
        let half_w = has_property_c(&ctx, &SupFn::constant(r(1, 2))).unwrap();
        let w = sub_has_c(&ctx, &half_w, &one_w).unwrap();
        let at = w.witness_at(&r(1, 3)).unwrap();
        assert_eq!(at.z_t.func().eval(&r(1, 3)), r(1, 2));
        // cross-check against the direct construction for the same sup
        let direct = has_property_c(&ctx, &SupFn::constant(r(1, 2))).unwrap();
        let at2 = direct.witness_at(&r(1, 3)).unwrap();
        assert_eq!(at2.z_t.func().eval(&r(1, 3)), r(1, 2));
    }

    #[test]
    fn complement_split_examples() {
        let ctx = f0_ctx();
        // n = 1, h = 1/2, g = f0
        let h_w = has_property_c(&ctx, &SupFn::constant(r(1, 2))).unwrap();
        let g = MElem::f0();
        let (g1, g2, report) = complement_split(&ctx, &h_w, 1, &g, &r(1, 4)).unwrap();
        assert!(report.recombines && report.g1_in_i && report.g2_in_i);
        assert_eq!(g1.func().add(g2.func()), *g.func());

        // zero splits trivially
        let (a, b, _) = complement_split(&ctx, &h_w, 1, &MElem::zero(), &r(1, 4)).unwrap();
        assert!(a.is_zero() && b.is_zero());

        // n = 2: g = 2 * (f0 ∧ 1/4), h = 1
        let h_w = has_property_c(&ctx, &one_sup()).unwrap();
        let d = in_m(&PwlFn::identity().meet(&PwlFn::constant(r(1, 4)))).unwrap();
        let g = d.scale(&Rat::int(2));
        let (g1, g2, report) = complement_split(&ctx, &h_w, 2, &g, &r(1, 2)).unwrap();
        assert!(report.recombines && report.g1_in_i && report.g2_in_i);
        assert_eq!(g1.func().add(g2.func()), *g.func());

        // missing gap is rejected
        let tall = has_property_c(&ctx, &SupFn::constant(Rat::one())).unwrap();
        assert!(complement_split(&ctx, &tall, 1, &g, &r(1, 4)).is_err());
    }

    #[test]
    fn restriction_examples() {
        let ctx = f0_ctx();
        let rep = IntervalRep::new(ctx.clone(), one_sup()).unwrap();
        // identity restriction
        let (same, report) = restrict_interval(&ctx, &rep, &r(1, 16)).unwrap();
        assert!(report.commutes);
        assert_eq!(same.ctx.f(), ctx.f());

        // restriction to a base with co-zero (0, 1/2)
        let hat = PwlFn::identity().meet(
            &PwlFn::constant(Rat::zero())
                .join(&PwlFn::constant(r(1, 2)).sub(&PwlFn::identity())),
        );
        let small = in_m(&hat.scale(&r(1, 2))).unwrap();
        let small_ctx = IdealCtx::new_below_f0(small).unwrap();
        let (restricted, report) = restrict_interval(&small_ctx, &rep, &r(1, 16)).unwrap();
        assert!(report.commutes);
        assert!(report.grid_points > 0);
        // the restricted lf witness is z ∧ f', inside N_{f'}
        assert!(crate::monoid::in_nf(&restricted.lf_witness, &small_ctx).is_ok());
    }
}
