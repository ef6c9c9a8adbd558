//! Oscillating tail functions and the non-extendability construction.
//!
//! A `TailFn` is piecewise linear with finitely many explicit segments
//! plus a parametrized infinite window pattern accumulating at one point.
//! Window `n` spans the dyadic interval between node `n` and node `n+1`;
//! the plateau occupies the two thirds of the window adjacent to node `n`
//! and the remaining third ramps linearly to the next plateau. Plateau
//! values follow a geometric rule, with even windows forced to zero in
//! alternating mode, so the node values alternate between the plateau
//! height and zero. The alternating pattern has limsup equal to the first
//! plateau and liminf zero at the accumulation point: no continuous
//! extension exists there, while every finite truncation is an ordinary
//! `PwlFn`.

use crate::interval::{has_property_c, in_ifh, SupFn};
use crate::localize::FundamentalSeq;
use crate::monoid::{
    alg_leq, in_m, in_nf, leq, positive_linear_window, riesz_decompose, sliver, sliver_bound,
    IdealCtx, MElem, MonoidError,
};
use crate::pwl::{compare, Germ, PwlFn};
use crate::rat::Rat;
use crate::rset::{Interval, RSet};
use crate::urysohn::urysohn;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Debug, Clone, thiserror::Error)]
pub enum MonsterError {
    #[error("invalid tail parameters: {0}")]
    BadParams(String),
    #[error("point {0} is outside the admissible region")]
    BadPoint(Rat),
    #[error("tail does not accumulate at {0}")]
    WrongAccumulation(Rat),
    #[error("monoid error: {0}")]
    Monoid(#[from] MonoidError),
    #[error("interval error: {0}")]
    Interval(#[from] crate::interval::IntervalError),
    #[error("nesting violated: {0}")]
    BadNesting(String),
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
}

/// Which end of the window zone the pattern accumulates at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    /// Windows march rightward toward `zone_hi`.
    Left,
    /// Windows march leftward toward `zone_lo`.
    Right,
}

/// A piecewise-linear function with an infinite oscillating window
/// pattern on `(zone_lo, zone_hi)`; `base` is authoritative outside the
/// zone. An empty zone makes a trivial wrapper around `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailFn {
    base: PwlFn,
    zone_lo: Rat,
    zone_hi: Rat,
    side: TailSide,
    hi0: Rat,
    hi_ratio: Rat,
    alternate: bool,
}

impl TailFn {
    pub fn new(
        base: PwlFn,
        zone_lo: Rat,
        zone_hi: Rat,
        side: TailSide,
        hi0: Rat,
        hi_ratio: Rat,
        alternate: bool,
    ) -> Result<TailFn, MonsterError> {
        if zone_lo > zone_hi || zone_lo < Rat::zero() || zone_hi > Rat::one() {
            return Err(MonsterError::BadParams(format!(
                "zone ({zone_lo},{zone_hi}) is not inside [0,1]"
            )));
        }
        if hi0.is_negative() {
            return Err(MonsterError::BadParams("negative plateau".into()));
        }
        if !hi_ratio.is_positive() || hi_ratio > Rat::one() {
            return Err(MonsterError::BadParams(format!(
                "plateau ratio {hi_ratio} outside (0,1]"
            )));
        }
        let t = TailFn { base, zone_lo, zone_hi, side, hi0, hi_ratio, alternate };
        if !t.is_trivial() {
            // continuity at the first node: the base must meet plateau 1
            let edge = t.node(1);
            if t.base.eval(&edge) != t.plateau_value(1) {
                return Err(MonsterError::BadParams(format!(
                    "base value {} at node {} does not meet plateau {}",
                    t.base.eval(&edge),
                    edge,
                    t.plateau_value(1)
                )));
            }
        }
        Ok(t)
    }

    /// Trivial wrapper: no window zone, the function is just `base`.
    pub fn wrap_pwl(base: PwlFn, at: Rat) -> TailFn {
        TailFn {
            base,
            zone_lo: at.clone(),
            zone_hi: at,
            side: TailSide::Left,
            hi0: Rat::zero(),
            hi_ratio: Rat::one(),
            alternate: true,
        }
    }

    pub fn base(&self) -> &PwlFn {
        &self.base
    }

    pub fn is_trivial(&self) -> bool {
        self.zone_lo == self.zone_hi
    }

    /// The accumulation point of the window pattern.
    pub fn accum(&self) -> &Rat {
        match self.side {
            TailSide::Left => &self.zone_hi,
            TailSide::Right => &self.zone_lo,
        }
    }

    pub fn zone_lo(&self) -> &Rat {
        &self.zone_lo
    }

    pub fn zone_hi(&self) -> &Rat {
        &self.zone_hi
    }

    pub fn hi0(&self) -> &Rat {
        &self.hi0
    }

    pub fn side(&self) -> TailSide {
        self.side
    }

    pub fn alternate(&self) -> bool {
        self.alternate
    }

    pub fn hi_ratio(&self) -> &Rat {
        &self.hi_ratio
    }

    fn span(&self) -> Rat {
        &self.zone_hi - &self.zone_lo
    }

    fn pow2(n: u32) -> Rat {
        Rat::from_bigint(num_bigint::BigInt::from(1u8) << n)
    }

    /// Node `n >= 1`: its distance to the accumulation point halves each
    /// step; node 1 is the zone edge away from the accumulation point.
    pub fn node(&self, n: u32) -> Rat {
        let dist = &self.span() / &TailFn::pow2(n - 1);
        match self.side {
            TailSide::Left => &self.zone_hi - &dist,
            TailSide::Right => &self.zone_lo + &dist,
        }
    }

    /// Plateau value of window `n`.
    pub fn plateau_value(&self, n: u32) -> Rat {
        if self.alternate && n % 2 == 0 {
            return Rat::zero();
        }
        let mut v = self.hi0.clone();
        if self.hi_ratio != Rat::one() {
            for _ in 1..n {
                v = &v * &self.hi_ratio;
            }
        }
        v
    }

    fn window_width(&self, n: u32) -> Rat {
        &self.span() / &TailFn::pow2(n)
    }

    /// End of the flat part of window `n`: the plateau occupies two
    /// thirds of the window starting at node `n`.
    pub fn plateau_end(&self, n: u32) -> Rat {
        let two_thirds = &self.window_width(n) * &Rat::new(2, 3);
        match self.side {
            TailSide::Left => &self.node(n) + &two_thirds,
            TailSide::Right => &self.node(n) - &two_thirds,
        }
    }

    /// Window index containing `t`, for `t` strictly inside the zone.
    fn window_of(&self, t: &Rat) -> u32 {
        debug_assert!(t > &self.zone_lo && t < &self.zone_hi);
        let mut n = 1u32;
        loop {
            let next = self.node(n + 1);
            let passed = match self.side {
                TailSide::Left => &next <= t,
                TailSide::Right => &next >= t,
            };
            if passed {
                n += 1;
            } else {
                return n;
            }
        }
    }

    /// Exact evaluation. Panics at the accumulation point of a
    /// non-trivial oscillating tail.
    pub fn eval(&self, t: &Rat) -> Rat {
        if self.is_trivial() || t <= &self.zone_lo || t >= &self.zone_hi {
            if !self.is_trivial() && t == self.accum() && !self.extendable() {
                panic!("evaluation at the accumulation point {t} of an oscillating tail");
            }
            return self.base.eval(t);
        }
        let n = self.window_of(t);
        let a = self.plateau_value(n);
        let flat_end = self.plateau_end(n);
        let inside_flat = match self.side {
            TailSide::Left => t <= &flat_end,
            TailSide::Right => t >= &flat_end,
        };
        if inside_flat {
            return a;
        }
        let b = self.plateau_value(n + 1);
        let next = self.node(n + 1);
        // linear ramp from (flat_end, a) to (next, b)
        let spanx = &next - &flat_end;
        &a + &(&(&(&b - &a) * &(t - &flat_end)) / &spanx)
    }

    /// Germ at 0, absent only when the pattern accumulates at 0 itself.
    pub fn germ(&self) -> Option<Germ> {
        if !self.is_trivial() && self.side == TailSide::Right && self.zone_lo.is_zero() {
            return None;
        }
        let mut g = self.base.germ();
        if !self.is_trivial() && self.zone_lo.is_positive() {
            g.eps = g.eps.min(self.zone_lo.clone());
        }
        Some(g)
    }

    pub fn scale(&self, q: &Rat) -> TailFn {
        assert!(q.is_positive());
        TailFn {
            base: self.base.scale(q),
            zone_lo: self.zone_lo.clone(),
            zone_hi: self.zone_hi.clone(),
            side: self.side,
            hi0: &self.hi0 * q,
            hi_ratio: self.hi_ratio.clone(),
            alternate: self.alternate,
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.base.is_nonneg() && !self.hi0.is_negative()
    }

    /// `(liminf, limsup)` at the accumulation point, read off the plateau
    /// rule symbolically.
    pub fn oscillation(&self) -> (Rat, Rat) {
        if self.is_trivial() {
            let v = self.base.eval(self.accum());
            return (v.clone(), v);
        }
        let limsup = if self.hi_ratio == Rat::one() { self.hi0.clone() } else { Rat::zero() };
        let liminf = if self.alternate { Rat::zero() } else { limsup.clone() };
        (liminf, limsup)
    }

    pub fn extendable(&self) -> bool {
        let (lo, hi) = self.oscillation();
        lo == hi
    }

    /// Smallest window count `k` whose flat part reaches `b`.
    pub fn windows_to_cover(&self, b: &Rat) -> u32 {
        let mut k = 1u32;
        loop {
            let end = self.plateau_end(k);
            let covered = match self.side {
                TailSide::Left => &end >= b,
                TailSide::Right => &end <= b,
            };
            if covered {
                return k;
            }
            k += 1;
        }
    }

    /// Finite truncation after window `k` for left-accumulating tails: an
    /// ordinary continuous function equal to the tail up to the flat part
    /// of window `k`, ramping to zero at node `k+1`, zero up to the
    /// accumulation point, then following `base`.
    pub fn truncate_after(&self, k: u32) -> PwlFn {
        assert!(
            self.side == TailSide::Left && !self.is_trivial(),
            "truncation applies to left-accumulating tails"
        );
        let mut pts: Vec<(Rat, Rat)> = Vec::new();
        for (x, y) in self.base.points() {
            if x <= &self.zone_lo {
                pts.push((x.clone(), y.clone()));
            }
        }
        if pts.last().map(|(x, _)| x != &self.zone_lo).unwrap_or(true) {
            pts.push((self.zone_lo.clone(), self.base.eval(&self.zone_lo)));
        }
        for n in 1..=k {
            let a = self.plateau_value(n);
            push_dedup(&mut pts, self.node(n), a.clone());
            push_dedup(&mut pts, self.plateau_end(n), a);
        }
        push_dedup(&mut pts, self.node(k + 1), Rat::zero());
        if self.zone_hi != Rat::one() {
            push_dedup(&mut pts, self.zone_hi.clone(), Rat::zero());
        }
        for (x, y) in self.base.points() {
            if x > &self.zone_hi {
                push_dedup(&mut pts, x.clone(), y.clone());
            }
        }
        if pts.last().map(|(x, _)| x != &Rat::one()).unwrap_or(true) {
            pts.push((Rat::one(), self.base.eval(&Rat::one())));
        }
        PwlFn::from_points(pts).expect("truncation points are ordered")
    }

    /// An explicit function agreeing with the tail exactly on `[0, b]`,
    /// for left tails with `b` strictly below the accumulation point.
    pub fn expand_up_to(&self, b: &Rat) -> PwlFn {
        assert!(self.side == TailSide::Left);
        if self.is_trivial() || b <= &self.zone_lo {
            return self.base.clone();
        }
        assert!(b < self.accum(), "expansion must stop below the accumulation point");
        self.truncate_after(self.windows_to_cover(b))
    }

    /// A bound for every value the function takes.
    pub fn sup_bound(&self) -> Rat {
        self.base.max_value().max(self.hi0.clone())
    }
}

fn push_dedup(pts: &mut Vec<(Rat, Rat)>, x: Rat, y: Rat) {
    if let Some(last) = pts.last() {
        if last.0 == x {
            return;
        }
    }
    pts.push((x, y));
}

impl fmt::Display for TailFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "tail[{}]", self.base);
        }
        write!(
            f,
            "tail[{}; zone=({},{}) {} hi0={} ratio={}{}]",
            self.base,
            self.zone_lo,
            self.zone_hi,
            match self.side {
                TailSide::Left => "left",
                TailSide::Right => "right",
            },
            self.hi0,
            self.hi_ratio,
            if self.alternate { " alternating" } else { "" }
        )
    }
}

// Stage file format: {"prefix":"pwl[...]","tail":{"rho":...,"mu":...,"plateau":...,"rule":"dyadic"}}
impl Serialize for TailFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TailPart<'a> {
            rho: &'a Rat,
            mu: Rat,
            plateau: &'a Rat,
            rule: &'static str,
        }
        let mut s = serializer.serialize_struct("TailFn", 2)?;
        s.serialize_field("prefix", &self.base)?;
        s.serialize_field(
            "tail",
            &TailPart {
                rho: self.accum(),
                mu: self.base.germ().mu,
                plateau: &self.hi0,
                rule: "dyadic",
            },
        )?;
        s.end()
    }
}

/// Check `x <= g` on `s` for piecewise-linear `x` against a tail `g`.
/// The finite part is compared on an explicit expansion. On any part of
/// `s` approaching the accumulation point, `x` is a single line past its
/// last breakpoint and the recurrent minimum of the tail caps it there;
/// a `true` answer is always exact, while a line that dips under the cap
/// only inside the window zone may be rejected conservatively. Every
/// caller keeps its candidates supported strictly below the zone tail,
/// where the decision is exact.
pub fn pwl_le_tail_on(x: &PwlFn, g: &TailFn, s: &RSet) -> bool {
    if g.is_trivial() {
        return compare(x, g.base(), s).leq;
    }
    match g.side {
        TailSide::Left => {
            let rho = g.accum();
            let mut cut = g.zone_lo().clone();
            for (bx, _) in x.points() {
                if bx < rho && bx > &cut {
                    cut = bx.clone();
                }
            }
            for iv in s.intervals() {
                for p in [&iv.lo, &iv.hi] {
                    if p < rho && p > &cut {
                        cut = p.clone();
                    }
                }
            }
            let reaches = s
                .intervals()
                .iter()
                .any(|iv| !iv.is_degenerate() && &iv.lo < rho && &iv.hi >= rho);
            if reaches {
                // x is one line between its last breakpoint below rho and
                // rho, while the recurrent minimum of g accumulates there
                let cap = if g.alternate { Rat::zero() } else { g.oscillation().0 };
                if x.eval(&cut) > cap || x.eval(rho) > cap {
                    return false;
                }
            }
            let mid = Rat::midpoint(&cut, rho);
            let finite = g.expand_up_to(&mid);
            let below = RSet::interval(Interval::closed(Rat::zero(), mid));
            if !compare(x, &finite, &below.intersect(s)).leq {
                return false;
            }
            let beyond = RSet::interval(Interval::closed(rho.clone(), Rat::one()));
            compare(x, g.base(), &beyond.intersect(s)).leq
        }
        TailSide::Right => {
            // only needed for sup functions accumulating at 0; near 0 the
            // recurrent minimum caps any function with a germ
            let cap = if g.alternate { Rat::zero() } else { g.oscillation().0 };
            let germ = x.germ();
            if germ.lam > cap || (germ.lam == cap && germ.mu.is_positive()) {
                return false;
            }
            let beyond = RSet::interval(Interval::closed(g.zone_hi().clone(), Rat::one()));
            compare(x, g.base(), &beyond.intersect(s)).leq
        }
    }
}

/// Exact check of `g <= p` (strict when asked) over `s` for a tail `g`
/// against piecewise-linear `p`: finite expansion plus the plateau
/// envelope over all remaining windows.
pub fn tail_le_pwl_on(g: &TailFn, p: &PwlFn, s: &RSet, strict: bool) -> bool {
    if g.is_trivial() {
        let rep = compare(g.base(), p, s);
        return if strict { rep.strict } else { rep.leq };
    }
    let accum = g.accum().clone();
    // expand enough windows to clear the breakpoints of p near the zone
    let mut k = 2u32;
    for (bx, _) in p.points() {
        let inside = match g.side {
            TailSide::Left => bx > g.zone_lo() && bx < &accum,
            TailSide::Right => bx > &accum && bx < g.zone_hi(),
        };
        if inside {
            k = k.max(g.windows_to_cover(bx));
        }
    }
    let cut = g.plateau_end(k + 1);
    match g.side {
        TailSide::Left => {
            let finite = g.expand_up_to(&cut);
            let below = RSet::interval(Interval::closed(Rat::zero(), cut.clone()));
            let rep = compare(&finite, p, &below.intersect(s));
            if !(if strict { rep.strict } else { rep.leq }) {
                return false;
            }
            let envelope = g.plateau_value(k + 1).max(g.plateau_value(k + 2));
            let zone_rest = RSet::interval(Interval::new(cut, accum.clone(), false, false));
            let rest = zone_rest.intersect(s);
            if !rest.is_empty() {
                let m = p.min_over(&rest).expect("non-empty").1;
                if !(if strict { envelope < m } else { envelope <= m }) {
                    return false;
                }
            }
            let beyond = RSet::interval(Interval::closed(accum, Rat::one()));
            let rep = compare(g.base(), p, &beyond.intersect(s));
            if strict {
                rep.strict
            } else {
                rep.leq
            }
        }
        TailSide::Right => {
            let finite = right_expand(g, &cut);
            let region = RSet::interval(Interval::closed(cut.clone(), Rat::one()));
            let rep = compare(&finite, p, &region.intersect(s));
            if !(if strict { rep.strict } else { rep.leq }) {
                return false;
            }
            let envelope = g.plateau_value(k + 1).max(g.plateau_value(k + 2));
            let zone_rest = RSet::interval(Interval::new(accum, cut, false, false));
            let rest = zone_rest.intersect(s);
            if !rest.is_empty() {
                let m = p.min_over(&rest).expect("non-empty").1;
                if !(if strict { envelope < m } else { envelope <= m }) {
                    return false;
                }
            }
            true
        }
    }
}

/// Explicit expansion of a right-accumulating tail, exact on `[cut, 1]`.
fn right_expand(g: &TailFn, cut: &Rat) -> PwlFn {
    let k = g.windows_to_cover(cut);
    let mut pts: Vec<(Rat, Rat)> = vec![(Rat::zero(), Rat::zero())];
    if g.zone_lo().is_positive() {
        push_dedup(&mut pts, g.zone_lo().clone(), Rat::zero());
    }
    push_dedup(&mut pts, g.plateau_end(k), g.plateau_value(k));
    for n in (1..=k).rev() {
        let a = g.plateau_value(n);
        push_dedup(&mut pts, g.plateau_end(n), a.clone());
        push_dedup(&mut pts, g.node(n), a);
    }
    for (x, y) in g.base().points() {
        if x > g.zone_hi() {
            push_dedup(&mut pts, x.clone(), y.clone());
        }
    }
    if pts.last().map(|(x, _)| x != &Rat::one()).unwrap_or(true) {
        pts.push((Rat::one(), g.base().eval(&Rat::one())));
    }
    PwlFn::from_points(pts).expect("expansion points are ordered")
}

/// Output of [`build_monster`].
#[derive(Debug, Clone)]
pub struct MonsterBuild {
    pub f_prime: MElem,
    pub g: TailFn,
    pub rho: Rat,
    pub mu: Rat,
    pub lambda_prime: Rat,
    /// `h1 = lambda' * f0`, the strict upper envelope of `g`.
    pub h1: MElem,
    /// `h = 2 * h1`.
    pub h: MElem,
    pub ctx: IdealCtx,
}

/// Node rule for the window sequence; the dyadic rule halves the distance
/// to the accumulation point at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuSeqRule {
    #[default]
    Dyadic,
}

/// Build the monster: a context element `f'` below `f` whose co-zero set
/// is exactly `(0, rho)`, and the oscillating `g` equal to `mu * t` on
/// the prefix with alternating plateaus of height `mu * mu_1` toward
/// `rho`. Verifies the membership of every finite window in `M`, the
/// lattice-word identities on finite windows, and strict domination by
/// `h1 = h/2`.
pub fn build_monster(
    f: &MElem,
    h: &MElem,
    rho: &Rat,
    mu: &Rat,
    _rule: MuSeqRule,
) -> Result<MonsterBuild, MonsterError> {
    // f = lambda * f0 and h = 2 lambda' * f0, both exactly
    let lam = f.germ().mu;
    if f.func() != &PwlFn::identity().scale(&lam) || !lam.is_positive() {
        return Err(MonsterError::BadParams(format!(
            "f must be a positive multiple of f0, got {}",
            f.func()
        )));
    }
    let lam_prime = &h.germ().mu / &Rat::int(2);
    if h.func() != &PwlFn::identity().scale(&(&lam_prime * &Rat::int(2)))
        || !lam_prime.is_positive()
    {
        return Err(MonsterError::BadParams(format!(
            "h must be an even positive multiple of f0, got {}",
            h.func()
        )));
    }
    if !(mu.is_positive() && mu < &lam_prime) {
        return Err(MonsterError::BadParams(format!(
            "need 0 < mu < lambda' (mu={mu}, lambda'={lam_prime})"
        )));
    }
    if !(rho.is_positive() && rho < &Rat::one()) {
        return Err(MonsterError::BadParams(format!("rho={rho} must be interior to (0,1)")));
    }

    // f' = (1/2)(f ∧ tent) with the tent supported on [0, rho)
    let tent_k = RSet::interval(Interval::closed(
        Rat::zero(),
        Rat::midpoint(&Rat::zero(), rho),
    ));
    let tent_v = RSet::interval(Interval::new(Rat::zero(), rho.clone(), true, false));
    let tent = urysohn(&tent_k, &tent_v, &(f.func().max_value() + Rat::one()))
        .map_err(|e| MonsterError::BadParams(e.to_string()))?;
    let f_prime = in_m(&f.func().meet(&tent).scale(&Rat::new(1, 2)))
        .expect("shrunken context is in M");
    if alg_leq(&f_prime, f).is_err() {
        return Err(MonsterError::VerificationFailed("f' must sit below f".into()));
    }
    let expected_cozero = RSet::interval(Interval::open(Rat::zero(), rho.clone()));
    if f_prime.cozero() != expected_cozero {
        return Err(MonsterError::VerificationFailed(format!(
            "co-zero of f' is {}, expected (0,{rho})",
            f_prime.cozero()
        )));
    }
    let ctx = IdealCtx::new(f_prime.clone())?;

    // the tail: prefix mu * t up to mu_1 = rho/2, alternating plateaus at
    // mu * mu_1 on the dyadic windows toward rho, zero beyond
    let mu1 = Rat::midpoint(&Rat::zero(), rho);
    let plateau = mu * &mu1;
    let base = PwlFn::from_points(vec![
        (Rat::zero(), Rat::zero()),
        (mu1.clone(), plateau.clone()),
        (rho.clone(), Rat::zero()),
        (Rat::one(), Rat::zero()),
    ])
    .expect("monster base points are ordered");
    let g = TailFn::new(
        base,
        mu1.clone(),
        rho.clone(),
        TailSide::Left,
        plateau.clone(),
        Rat::one(),
        true,
    )?;

    // sanity on the fixed reference values
    debug_assert_eq!(g.eval(&mu1), plateau);
    debug_assert_eq!(g.oscillation(), (Rat::zero(), plateau.clone()));

    // each finite window is a lattice word over M and agrees with g
    for k in 1..=3 {
        if !lattice_window_identity(&g, mu, k) {
            return Err(MonsterError::VerificationFailed(format!(
                "lattice identity fails on window {k}"
            )));
        }
        let trunc = in_m(&g.truncate_after(k))
            .map_err(|e| MonsterError::VerificationFailed(format!("truncation {k}: {e}")))?;
        debug_assert!(!trunc.is_zero());
    }

    let h1 = in_m(&PwlFn::identity().scale(&lam_prime)).expect("h1 is in M");
    if !dominated(&g, &h1) {
        return Err(MonsterError::VerificationFailed(
            "g must be strictly dominated by h1 on U_{f'}".into(),
        ));
    }
    Ok(MonsterBuild {
        f_prime,
        g,
        rho: rho.clone(),
        mu: mu.clone(),
        lambda_prime: lam_prime,
        h1,
        h: h.clone(),
        ctx,
    })
}

/// Check `g = ((mu f0) ∧ r1) ∨ r2 ∧ r3 ...` on `[0, node(k+1)]`, where the
/// `r_n` are the Urysohn functions implied by the window pattern: odd
/// ones cap down to the next zero node, even ones join up to the next
/// plateau. Also checks the word stays in `M`.
fn lattice_window_identity(g: &TailFn, mu: &Rat, k: u32) -> bool {
    let mut expr = PwlFn::identity().scale(mu).meet(&window_cap(g, 1));
    for n in 2..=k {
        if n % 2 == 0 {
            expr = expr.join(&window_join(g, n));
        } else {
            expr = expr.meet(&window_cap(g, n));
        }
    }
    if in_m(&expr).is_err() {
        return false;
    }
    let upto = g.node(k + 1);
    let window = RSet::interval(Interval::closed(Rat::zero(), upto.clone()));
    let expanded = g.expand_up_to(&upto);
    compare(&expr, &expanded, &window).leq && compare(&expanded, &expr, &window).leq
}

/// Urysohn cap for odd window `n`: the plateau height up to the flat end
/// of window `n`, ramping to zero at node `n+1`.
fn window_cap(g: &TailFn, n: u32) -> PwlFn {
    let v = g.plateau_value(n);
    let mut pts = vec![(Rat::zero(), v.clone())];
    push_dedup(&mut pts, g.plateau_end(n), v);
    push_dedup(&mut pts, g.node(n + 1), Rat::zero());
    if g.node(n + 1) != Rat::one() {
        pts.push((Rat::one(), Rat::zero()));
    }
    PwlFn::from_points(pts).expect("cap points ordered")
}

/// Urysohn lift for even window `n`: zero up to the flat end of window
/// `n`, ramping to the next plateau at node `n+1` and staying there.
fn window_join(g: &TailFn, n: u32) -> PwlFn {
    let v = g.plateau_value(n + 1);
    let mut pts = vec![(Rat::zero(), Rat::zero())];
    push_dedup(&mut pts, g.plateau_end(n), Rat::zero());
    push_dedup(&mut pts, g.node(n + 1), v.clone());
    if g.node(n + 1) != Rat::one() {
        pts.push((Rat::one(), v));
    }
    PwlFn::from_points(pts).expect("join points ordered")
}

/// Oscillation report at the accumulation point.
#[derive(Debug, Clone, Serialize)]
pub struct OscillationReport {
    pub liminf: Rat,
    pub limsup: Rat,
    pub extendable: bool,
}

/// Symbolic `(liminf, limsup)` of the tail at `rho`, which must be its
/// accumulation point; non-extendability holds exactly when they differ.
pub fn oscillation(g: &TailFn, rho: &Rat) -> Result<OscillationReport, MonsterError> {
    if g.accum() != rho {
        return Err(MonsterError::WrongAccumulation(rho.clone()));
    }
    let (liminf, limsup) = g.oscillation();
    Ok(OscillationReport { extendable: liminf == limsup, liminf, limsup })
}

/// A local witness: `z` in `M` agreeing with the tail on the window.
#[derive(Debug, Clone)]
pub struct LocalWitness {
    pub z: MElem,
    pub window: RSet,
}

/// The tail is locally in `M`: produce `z_t` in `M` equal to `g` on an
/// explicit neighbourhood of `t`, half the distance to the nearest tail
/// breakpoint wide.
pub fn locally_in_m_witness(g: &TailFn, t: &Rat) -> Result<LocalWitness, MonsterError> {
    if g.is_trivial() || g.side() != TailSide::Left {
        return Err(MonsterError::BadParams(
            "local witnesses are for left-accumulating tails".into(),
        ));
    }
    let rho = g.accum();
    if !(t.is_positive() && t < rho) {
        return Err(MonsterError::BadPoint(t.clone()));
    }
    // nearest breakpoint distance
    let mut candidates: Vec<Rat> = Vec::new();
    if t <= g.zone_lo() {
        candidates.extend(g.base().breakpoints().cloned());
        candidates.push(g.zone_lo().clone());
    } else {
        let n = g.windows_to_cover(t).max(2);
        for m in n.saturating_sub(1).max(1)..=n + 1 {
            candidates.push(g.node(m));
            candidates.push(g.plateau_end(m));
        }
    }
    let mut d = t.clone().min(rho - t);
    for b in &candidates {
        let gap = (b - t).abs();
        if gap.is_positive() {
            d = d.min(gap);
        }
    }
    let d = &Rat::midpoint(&Rat::zero(), &d) / &Rat::int(2);
    let (a, b) = (t - &d, t + &d);

    // local expansion with ramps to zero over one more radius
    let outer_lo = &a - &d;
    let outer_hi = &b + &d;
    let e = g.expand_up_to(&Rat::midpoint(&outer_hi, rho).min(Rat::one()));
    let mut pts = vec![(Rat::zero(), Rat::zero())];
    push_dedup(&mut pts, outer_lo.clone(), Rat::zero());
    push_dedup(&mut pts, a.clone(), e.eval(&a));
    for (x, y) in e.points() {
        if x > &a && x < &b {
            push_dedup(&mut pts, x.clone(), y.clone());
        }
    }
    push_dedup(&mut pts, b.clone(), e.eval(&b));
    push_dedup(&mut pts, outer_hi.clone(), Rat::zero());
    if outer_hi != Rat::one() {
        pts.push((Rat::one(), Rat::zero()));
    }
    let local = PwlFn::from_points(pts).expect("local witness points ordered");

    // germ part near 0 keeps the witness in M
    let germ = g.germ().expect("left tails have a germ");
    let nu = if germ.mu.is_positive() {
        Rat::midpoint(&Rat::zero(), &germ.mu)
    } else {
        Rat::one()
    };
    let c = Rat::midpoint(&Rat::zero(), &outer_lo).min(germ.eps.clone());
    let z_fn = local.join(&sliver(&nu, &c));
    let z = in_m(&z_fn)
        .map_err(|e| MonsterError::VerificationFailed(format!("local witness: {e}")))?;

    // exact agreement on the declared window
    let window = RSet::interval(Interval::open(a.clone(), b.clone()));
    let closed = RSet::interval(Interval::closed(a, b.clone()));
    let expanded = g.expand_up_to(&Rat::midpoint(&b, rho));
    if !(compare(z.func(), &expanded, &closed).leq && compare(&expanded, z.func(), &closed).leq) {
        return Err(MonsterError::VerificationFailed(format!(
            "local witness disagrees with the tail near {t}"
        )));
    }
    Ok(LocalWitness { z, window })
}

/// Strict domination `g < h1` everywhere on `U_{f'}`: exact on the
/// prefix, symbolic on the window plateaus.
pub fn dominated(g: &TailFn, h1: &MElem) -> bool {
    let region = if g.is_trivial() {
        RSet::interval(Interval::new(Rat::zero(), Rat::one(), false, true))
    } else {
        RSet::interval(Interval::open(Rat::zero(), g.accum().clone()))
    };
    tail_le_pwl_on(g, h1.func(), &region, true)
}

/// One row of the interval-sum check.
#[derive(Debug, Clone, Serialize)]
pub struct SumCheckRow {
    pub precondition_ok: bool,
    pub riesz_ok: bool,
    pub strict_ok: bool,
    pub truncation_supported: bool,
    pub parts_in_bound: bool,
    pub recombines: bool,
    pub e_split_ok: bool,
}

impl SumCheckRow {
    pub fn passed(&self) -> bool {
        self.precondition_ok
            && self.riesz_ok
            && self.strict_ok
            && self.truncation_supported
            && self.parts_in_bound
            && self.recombines
            && self.e_split_ok
    }
}

/// Verify the interval-sum identity `E + ([0,h1] ∩ N_{f'}) = [0,h] ∩
/// N_{f'}` on samples: each `z` in `N_{f'}` below `h` splits as a
/// truncation `z1'` supported in `[0, beta]`, `beta < rho`, which in turn
/// splits under the pair `(g, h1 - g)`, plus a remainder below `h1`.
pub fn interval_sum_check(build: &MonsterBuild, zs: &[MElem]) -> Vec<SumCheckRow> {
    zs.iter().map(|z| sum_check_one(build, z)).collect()
}

fn sum_check_one(build: &MonsterBuild, z: &MElem) -> SumCheckRow {
    let ctx = &build.ctx;
    let h1 = &build.h1;
    let rho = &build.rho;
    let mut row = SumCheckRow {
        precondition_ok: false,
        riesz_ok: false,
        strict_ok: false,
        truncation_supported: false,
        parts_in_bound: false,
        recombines: false,
        e_split_ok: false,
    };
    let two_h1 = h1.scale(&Rat::int(2));
    row.precondition_ok = in_nf(z, ctx).is_ok() && leq(z, &two_h1);
    if !row.precondition_ok {
        return row;
    }
    if z.is_zero() {
        return SumCheckRow {
            precondition_ok: true,
            riesz_ok: true,
            strict_ok: true,
            truncation_supported: true,
            parts_in_bound: true,
            recombines: true,
            e_split_ok: true,
        };
    }
    let Ok((z1, z2)) = riesz_decompose(z, h1, h1) else {
        return row;
    };
    row.riesz_ok = true;
    row.strict_ok = lt(&z1, h1) && lt(&z2, h1);

    if z1.is_zero() {
        // trivial truncation: the E part is zero
        row.truncation_supported = true;
        row.parts_in_bound = leq(&z2, h1);
        row.recombines = z2.func() == z.func();
        row.e_split_ok = true;
        return row;
    }

    // cut region: beyond the last point where 2z >= h1 the truncation
    // remainder fits under h1 - z2
    let t_set = h1
        .func()
        .sub(&z.func().scale(&Rat::int(2)))
        .level_set_le(&Rat::zero());
    let c_lo = match t_set.max() {
        Some(m) => {
            debug_assert!(m < rho);
            Rat::midpoint(m, rho)
        }
        None => Rat::midpoint(&Rat::zero(), rho),
    };
    let beta = Rat::midpoint(&c_lo, rho);
    let cut_k = RSet::interval(Interval::closed(Rat::zero(), c_lo));
    let cut_v = RSet::interval(Interval::new(Rat::zero(), beta.clone(), true, false));
    let Ok(r_cut) = urysohn(&cut_k, &cut_v, &(z1.func().max_value() + Rat::one())) else {
        return row;
    };
    let a_fn = z1.func().meet(&r_cut);
    let b_fn = h1.func().sub(z2.func()).sub(&z1.func().sub(&a_fn));
    let (Some(wa), Some(wb)) = (positive_linear_window(&a_fn), positive_linear_window(&b_fn))
    else {
        return row;
    };
    let c = Rat::midpoint(&Rat::zero(), &wa.min(wb));
    let nu = sliver_bound(&a_fn, &c).min(sliver_bound(&b_fn, &c));
    let w = sliver(&nu, &c);
    let Ok(z1p) = in_m(&a_fn.sub(&w)) else {
        return row;
    };
    let Ok(rem) = in_m(&z.func().sub(z1p.func())) else {
        return row;
    };
    let beta_set = RSet::interval(Interval::closed(Rat::zero(), beta.clone()));
    row.truncation_supported = z1p.cozero().is_subset_of(&beta_set);
    row.parts_in_bound = in_nf(&z1p, ctx).is_ok()
        && leq(&z1p, h1)
        && in_nf(&rem, ctx).is_ok()
        && leq(&rem, h1);
    row.recombines = z1p.func().add(rem.func()) == *z.func();
    row.e_split_ok = e_membership_split(build, &z1p).is_ok();
    row
}

/// Split a `[0,h1] ∩ N_{f'}` element supported in `[0, beta]` into a part
/// in `I_{f'}(g)` and a part in `I_{f'}(h1 - g)`, verifying both
/// memberships exactly.
fn e_membership_split(build: &MonsterBuild, z1p: &MElem) -> Result<(), MonsterError> {
    let ctx = &build.ctx;
    let g = &build.g;
    let h1 = &build.h1;
    if z1p.is_zero() {
        return Ok(());
    }
    let supp_top = z1p
        .cozero()
        .max()
        .cloned()
        .unwrap_or_else(Rat::zero);
    let expand_to = Rat::midpoint(&supp_top, build.g.accum());
    let g_pwl = g.expand_up_to(&expand_to);
    let x_raw = z1p.func().meet(&g_pwl);

    // germ margins: both parts need strict room under lambda' near 0
    let mu_z = z1p.germ().mu;
    let margin = (&build.lambda_prime - &mu_z.clone().max(build.mu.clone()))
        .min(build.mu.clone());
    if !margin.is_positive() {
        return Err(MonsterError::VerificationFailed(
            "no germ margin for the E split".into(),
        ));
    }
    let w_x = positive_linear_window(&x_raw).ok_or_else(|| {
        MonsterError::VerificationFailed("x part lost its germ".into())
    })?;
    let c = Rat::midpoint(&Rat::zero(), &w_x.min(g.zone_lo().clone()));
    let nu = sliver_bound(&x_raw, &c).min(Rat::midpoint(&Rat::zero(), &margin));
    let w = sliver(&nu, &c);
    let half_w = w.scale(&Rat::new(1, 2));

    let x = in_m(&x_raw.sub(&w))
        .map_err(|e| MonsterError::VerificationFailed(format!("x part: {e}")))?;
    let zx = in_m(&x_raw.sub(&half_w))
        .map_err(|e| MonsterError::VerificationFailed(format!("zx: {e}")))?;
    let y = in_m(&z1p.func().sub(x.func()))
        .map_err(|e| MonsterError::VerificationFailed(format!("y part: {e}")))?;
    let zy = in_m(&y.func().add(&half_w))
        .map_err(|e| MonsterError::VerificationFailed(format!("zy: {e}")))?;

    let u = ctx.u_f();
    // x in I(g): x <_M zx <= g on U, zx strictly below g near 0
    let ok_x = in_nf(&x, ctx).is_ok()
        && in_nf(&zx, ctx).is_ok()
        && lt(&x, &zx)
        && pwl_le_tail_on(zx.func(), g, u)
        && zx
            .germ()
            .strictly_below(&g.germ().expect("left tail has a germ"));
    if !ok_x {
        return Err(MonsterError::VerificationFailed(
            "x part fails I(g) membership".into(),
        ));
    }
    // y in I(h1 - g): y <_M zy and zy <= h1 - g, i.e. g <= h1 - zy, with
    // germ room near 0
    let h1_minus_zy = h1.func().sub(zy.func());
    let target_germ = Germ {
        lam: Rat::zero(),
        mu: &build.lambda_prime - &build.mu,
        eps: g.zone_lo().clone(),
    };
    let ok_y = in_nf(&y, ctx).is_ok()
        && in_nf(&zy, ctx).is_ok()
        && lt(&y, &zy)
        && tail_le_pwl_on(g, &h1_minus_zy, u, false)
        && zy.germ().strictly_below(&target_germ);
    if !ok_y {
        return Err(MonsterError::VerificationFailed(
            "y part fails I(h1 - g) membership".into(),
        ));
    }
    // exact recombination
    if x.func().add(y.func()) != *z1p.func() {
        return Err(MonsterError::VerificationFailed(
            "E split does not recombine".into(),
        ));
    }
    Ok(())
}

/// Output of [`ideal_split`].
#[derive(Debug, Clone)]
pub struct IdealSplit {
    pub g1: MElem,
    pub g2: MElem,
    pub g1_prime: MElem,
    pub g2_prime: MElem,
    /// `g - g1'`, vanishing on `K`.
    pub remainder: PwlFn,
    /// Complement support piece: `K' = [0,1] \ V`, disjoint from `K`.
    pub k_prime: RSet,
}

/// The orthogonal-decomposition shadow: split `g` into a part of `N_f`
/// and a part supported near 0 and away from `K`, with the refinement
/// `g2 = g2' + (g - g1')` where `g2'` lies in `N_{f'}` and the remainder
/// vanishes on `K`. Requires the nesting
/// `K1 ⊆ U_{f'} ∪ {0} ⊆ K ⊆ int(K2) , K2 ⊆ U_f ∪ {0}` with `K1` a
/// compact neighbourhood of 0 and `g` a pure germ line near 0.
pub fn ideal_split(
    g: &MElem,
    f_ctx: &IdealCtx,
    fp_ctx: &IdealCtx,
    k1: &RSet,
    k: &RSet,
    k2: &RSet,
) -> Result<IdealSplit, MonsterError> {
    let zero_pt = RSet::point(Rat::zero());
    let ufp = fp_ctx.u_f().union(&zero_pt);
    let uf = f_ctx.u_f().union(&zero_pt);
    for (name, s) in [("K1", k1), ("K", k), ("K2", k2)] {
        if !s.is_relatively_closed() {
            return Err(MonsterError::BadNesting(format!("{name} must be compact")));
        }
    }
    let k1_start = k1
        .intervals()
        .first()
        .filter(|iv| iv.lo.is_zero() && iv.hi.is_positive())
        .ok_or_else(|| {
            MonsterError::BadNesting("K1 must be a compact neighbourhood of 0".into())
        })?;
    if !k1.is_subset_of(&ufp) {
        return Err(MonsterError::BadNesting("K1 must sit inside U_{f'} ∪ {0}".into()));
    }
    if !ufp.is_subset_of(k) {
        return Err(MonsterError::BadNesting("U_{f'} ∪ {0} must sit inside K".into()));
    }
    if !k.is_subset_of(&k2.interior()) {
        return Err(MonsterError::BadNesting(
            "K needs open slack inside K2".into(),
        ));
    }
    if !k2.is_subset_of(&uf) {
        return Err(MonsterError::BadNesting("K2 must sit inside U_f ∪ {0}".into()));
    }
    let germ = g.germ();
    if !(germ.lam.is_zero() && germ.mu.is_positive()) {
        return Err(MonsterError::BadParams(
            "g must be a pure germ line near 0".into(),
        ));
    }
    let beta = germ.mu.clone();

    // r1: plateau above g on a fattening V of K inside the interior of K2
    let v_u = k2.interior();
    let rho_big = g.func().max_value() + Rat::one();
    let (r1, v_plateau) = crate::urysohn::urysohn_full(k, &v_u, &rho_big)
        .map_err(|e| MonsterError::BadNesting(e.to_string()))?;
    let g1p = in_m(&g.func().meet(&r1))
        .map_err(|e| MonsterError::VerificationFailed(format!("g1': {e}")))?;
    if in_nf(&g1p, f_ctx).is_err() {
        return Err(MonsterError::VerificationFailed("g1' must lie in N_f".into()));
    }

    // r2: small plateau near 0 inside W ⊆ K1
    let w_end = k1_start.hi.clone().min(germ.eps.clone());
    let alpha = Rat::midpoint(&Rat::zero(), &beta);
    let rho_small = &alpha * &w_end;
    let w_k = RSet::interval(Interval::closed(
        Rat::zero(),
        Rat::midpoint(&Rat::zero(), &w_end),
    ));
    let w_v = RSet::interval(Interval::new(Rat::zero(), w_end, true, false));
    let r2 = urysohn(&w_k, &w_v, &rho_small)
        .map_err(|e| MonsterError::BadNesting(e.to_string()))?;
    let g2p = in_m(&PwlFn::identity().scale(&alpha).meet(&r2))
        .map_err(|e| MonsterError::VerificationFailed(format!("g2': {e}")))?;
    if !g2p.cozero().is_subset_of(k1) {
        return Err(MonsterError::VerificationFailed(
            "g2' must be supported inside K1".into(),
        ));
    }
    if alg_leq(&g2p, &g1p).is_err() {
        return Err(MonsterError::VerificationFailed("g2' must sit below g1'".into()));
    }
    if in_nf(&g2p, fp_ctx).is_err() {
        return Err(MonsterError::VerificationFailed("g2' must lie in N_{f'}".into()));
    }

    let remainder = g.func().sub(g1p.func());
    let g2 = in_m(&g2p.func().add(&remainder))
        .map_err(|e| MonsterError::VerificationFailed(format!("g2: {e}")))?;
    let g1 = in_m(&g1p.func().sub(g2p.func()))
        .map_err(|e| MonsterError::VerificationFailed(format!("g1: {e}")))?;

    // postconditions
    if g1.func().add(g2.func()) != *g.func() {
        return Err(MonsterError::VerificationFailed("parts must recombine".into()));
    }
    if in_nf(&g1, f_ctx).is_err() {
        return Err(MonsterError::VerificationFailed("g1 must lie in N_f".into()));
    }
    let k_prime = v_plateau.complement();
    if !k_prime.intersect(k).is_empty() {
        return Err(MonsterError::VerificationFailed("K' must avoid K".into()));
    }
    if !g2.cozero().is_subset_of(&k1.union(&k_prime)) {
        return Err(MonsterError::VerificationFailed(
            "g2 must be supported in K1 ∪ K'".into(),
        ));
    }
    let rem_zero = remainder.zero_set();
    if !k.is_subset_of(&rem_zero) {
        return Err(MonsterError::VerificationFailed(
            "the remainder must vanish on K".into(),
        ));
    }
    Ok(IdealSplit { g1, g2, g1_prime: g1p, g2_prime: g2p, remainder, k_prime })
}

fn lt(a: &MElem, b: &MElem) -> bool {
    crate::monoid::lt(a, b)
}

/// One stage of the monster tower.
#[derive(Debug, Clone, Serialize)]
pub struct TowerStage {
    pub n: u32,
    pub f_prime: MElem,
    pub g: TailFn,
    pub rho: Rat,
    pub mu: Rat,
    pub below_prev: bool,
    pub below_seq: bool,
    pub rho_in_prev_cozero: bool,
    pub oscillation_gap: Rat,
}

/// Iterate the monster construction along a fundamental sequence: each
/// stage's context sits below the previous stage and the matching
/// sequence element, with its own non-extendable tail at
/// `rho_n = 2^{-(n+1)}`.
pub fn monster_tower(depth: u32, seq: &FundamentalSeq) -> Result<Vec<TowerStage>, MonsterError> {
    if (depth as usize) >= seq.len() {
        return Err(MonsterError::BadParams(format!(
            "depth {depth} needs a fundamental sequence of length > depth"
        )));
    }
    let mut stages: Vec<TowerStage> = Vec::new();
    let mut prev = seq.elems()[0].clone();
    for n in 1..=depth {
        let rho = Rat::one() / TailFn::pow2(n + 1);
        let seq_elem = &seq.elems()[n as usize];
        let rho_in_prev_cozero = prev.cozero().contains(&rho);

        // f'_n = (1/2)(f'_{n-1} ∧ f_n ∧ tent)
        let tent_k = RSet::interval(Interval::closed(
            Rat::zero(),
            Rat::midpoint(&Rat::zero(), &rho),
        ));
        let tent_v = RSet::interval(Interval::new(Rat::zero(), rho.clone(), true, false));
        let cap = prev.func().max_value().max(seq_elem.func().max_value()) + Rat::one();
        let tent = urysohn(&tent_k, &tent_v, &cap)
            .map_err(|e| MonsterError::BadParams(e.to_string()))?;
        let fp = in_m(
            &prev
                .func()
                .meet(seq_elem.func())
                .meet(&tent)
                .scale(&Rat::new(1, 2)),
        )
        .expect("tower contexts are in M");
        let below_prev = leq(&fp, &prev);
        let below_seq = leq(&fp, seq_elem);
        let expected = RSet::interval(Interval::open(Rat::zero(), rho.clone()));
        if fp.cozero() != expected {
            return Err(MonsterError::VerificationFailed(format!(
                "stage {n}: co-zero {} differs from (0,{rho})",
                fp.cozero()
            )));
        }

        // the stage tail rides the germ of f'_n: mu_n is half its slope
        let slope = fp.germ().mu;
        let mu = Rat::midpoint(&Rat::zero(), &slope);
        let mu1 = Rat::midpoint(&Rat::zero(), &rho);
        let plateau = &mu * &mu1;
        let base = PwlFn::from_points(vec![
            (Rat::zero(), Rat::zero()),
            (mu1.clone(), plateau.clone()),
            (rho.clone(), Rat::zero()),
            (Rat::one(), Rat::zero()),
        ])
        .expect("stage base ordered");
        let g = TailFn::new(
            base,
            mu1,
            rho.clone(),
            TailSide::Left,
            plateau.clone(),
            Rat::one(),
            true,
        )?;
        let report = oscillation(&g, &rho)?;
        if report.extendable {
            return Err(MonsterError::VerificationFailed(format!(
                "stage {n} tail must not extend continuously"
            )));
        }
        stages.push(TowerStage {
            n,
            f_prime: fp.clone(),
            g,
            rho,
            mu,
            below_prev,
            below_seq,
            rho_in_prev_cozero,
            oscillation_gap: plateau,
        });
        prev = fp;
    }
    Ok(stages)
}

/// Property (C) for the monster tail over its own context, built from the
/// generic machinery; exposed for the suite.
pub fn monster_has_property_c(build: &MonsterBuild) -> bool {
    has_property_c(&build.ctx, &SupFn::Tail(build.g.clone())).is_ok()
}

/// Membership of a candidate in `I_{f'}(g)` for the monster tail.
pub fn monster_ifh(build: &MonsterBuild, cand: &MElem) -> Result<bool, MonsterError> {
    Ok(in_ifh(cand, &build.ctx, &SupFn::Tail(build.g.clone()))?.member)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn default_build() -> MonsterBuild {
        let f = MElem::f0();
        let h = MElem::f0(); // h = 2 * (1/2) * f0: lambda' = 1/2
        build_monster(&f, &h, &r(1, 2), &r(1, 4), MuSeqRule::Dyadic).unwrap()
    }

    #[test]
    fn monster_geometry() {
        let b = default_build();
        let g = &b.g;
        // dyadic nodes mu_n = rho (1 - 2^-n)
        assert_eq!(g.node(1), r(1, 4));
        assert_eq!(g.node(2), r(3, 8));
        assert_eq!(g.node(3), r(7, 16));
        // alternating plateaus of height mu * mu_1 = 1/16
        assert_eq!(g.plateau_value(1), r(1, 16));
        assert_eq!(g.plateau_value(2), Rat::zero());
        assert_eq!(g.plateau_value(3), r(1, 16));
        // g(mu_1) = 1/16
        assert_eq!(g.eval(&r(1, 4)), r(1, 16));
        // f' has co-zero exactly (0, 1/2)
        assert_eq!(b.f_prime.cozero().to_string(), "{(0,1/2)}");
    }

    #[test]
    fn monster_eval() {
        let g = default_build().g;
        // prefix: mu * t
        assert_eq!(g.eval(&r(1, 8)), r(1, 32));
        // flat part of window 1 ends at 1/4 + (2/3)(1/8) = 1/3
        assert_eq!(g.plateau_end(1), r(1, 3));
        assert_eq!(g.eval(&r(7, 24)), r(1, 16));
        // ramp from (1/3, 1/16) to (3/8, 0): its midpoint gives 1/32
        assert_eq!(g.eval(&r(17, 48)), r(1, 32));
        assert_eq!(g.eval(&r(3, 8)), Rat::zero());
        // zero beyond rho
        assert_eq!(g.eval(&r(3, 4)), Rat::zero());
    }

    #[test]
    fn oscillation_report() {
        let b = default_build();
        let rep = oscillation(&b.g, &r(1, 2)).unwrap();
        assert_eq!((rep.liminf, rep.limsup), (Rat::zero(), r(1, 16)));
        assert!(!rep.extendable);
        assert!(matches!(
            oscillation(&b.g, &r(1, 3)),
            Err(MonsterError::WrongAccumulation(_))
        ));
        // scaling scales the plateau
        let rep = oscillation(&b.g.scale(&Rat::int(2)), &r(1, 2)).unwrap();
        assert_eq!(rep.limsup, r(1, 8));
        // trivial wrap is extendable with the function value
        let t = TailFn::wrap_pwl(PwlFn::identity(), r(1, 2));
        let rep = oscillation(&t, &r(1, 2)).unwrap();
        assert_eq!((rep.liminf.clone(), rep.limsup.clone()), (r(1, 2), r(1, 2)));
        assert!(rep.extendable);
    }

    #[test]
    fn truncations_are_continuous_members() {
        let g = default_build().g;
        for k in 1..=4 {
            let t = g.truncate_after(k);
            let cut = g.plateau_end(k);
            let probe = Rat::midpoint(&g.node(k), &cut);
            assert_eq!(t.eval(&probe), g.eval(&probe));
            assert_eq!(t.eval(&g.node(k + 1)), Rat::zero());
            assert!(in_m(&t).is_ok());
        }
    }

    #[test]
    fn domination_examples() {
        let b = default_build();
        // plateau 1/16 < (1/2) t on [1/4, 1/2): 1/16 < 1/8
        assert!(dominated(&b.g, &b.h1));
        // the plateau constant touches g: not strict
        let cap = in_m(&PwlFn::constant(r(1, 16))).unwrap();
        assert!(!dominated(&b.g, &cap));
        // prefix slope comparison: mu < lambda' required
        let barely = in_m(&PwlFn::identity().scale(&r(1, 4))).unwrap();
        assert!(!dominated(&b.g, &barely));
    }

    #[test]
    fn local_witnesses() {
        let b = default_build();
        // prefix point
        for t in [r(1, 8), r(5, 16), r(17, 48), r(13, 32)] {
            let w = locally_in_m_witness(&b.g, &t).unwrap();
            assert!(w.window.contains(&t));
        }
        // errors at 0 and at rho
        assert!(matches!(
            locally_in_m_witness(&b.g, &Rat::zero()),
            Err(MonsterError::BadPoint(_))
        ));
        assert!(matches!(
            locally_in_m_witness(&b.g, &r(1, 2)),
            Err(MonsterError::BadPoint(_))
        ));
    }

    #[test]
    fn monster_property_c() {
        let b = default_build();
        assert!(monster_has_property_c(&b));
        // witnesses replay at sample points
        let w = has_property_c(&b.ctx, &SupFn::Tail(b.g.clone())).unwrap();
        for t in [r(1, 8), r(7, 24), r(2, 5)] {
            let at = w.witness_at(&t).unwrap();
            assert!(at.window.contains(&t));
        }
    }

    #[test]
    fn sum_check_samples() {
        let b = default_build();
        // deterministic samples in N_{f'} below h = 2 h1
        let mut zs = vec![MElem::zero()];
        for (num, den) in [(1i64, 2i64), (1, 3), (2, 3), (1, 1)] {
            let cap = b.f_prime.func().scale(&Rat::int(4)).meet(b.h1.func());
            let z = in_m(&cap.scale(&Rat::new(num, 2 * den)))
                .unwrap();
            zs.push(z);
        }
        let rows = interval_sum_check(&b, &zs);
        for (i, row) in rows.iter().enumerate() {
            assert!(row.passed(), "sample {i} failed: {row:?}");
        }
    }

    #[test]
    fn ideal_split_example() {
        // f = f0, f' with co-zero (0, 1/4); K-chain around it
        let f_ctx = IdealCtx::f0_ctx();
        let b = build_monster(&MElem::f0(), &MElem::f0(), &r(1, 4), &r(1, 8), MuSeqRule::Dyadic)
            .unwrap();
        let fp_ctx = b.ctx.clone();
        let k1: RSet = "{[0,1/8]}".parse().unwrap();
        let k: RSet = "{[0,1/4]}".parse().unwrap();
        let k2: RSet = "{[0,1/2]}".parse().unwrap();
        // g: a germ line capped into a bump over the interior of K2
        let g = in_m(&PwlFn::identity().scale(&r(1, 2)).meet(&PwlFn::constant(r(1, 8))))
            .unwrap();
        let split = ideal_split(&g, &f_ctx, &fp_ctx, &k1, &k, &k2).unwrap();
        assert_eq!(split.g1.func().add(split.g2.func()), *g.func());
        // the remainder vanishes on K
        assert!(k.is_subset_of(&split.remainder.zero_set()));
        // collapsed nesting is rejected
        assert!(matches!(
            ideal_split(&g, &f_ctx, &fp_ctx, &k, &k, &k),
            Err(MonsterError::BadNesting(_))
        ));
    }

    #[test]
    fn tower_depth_three() {
        let seq = crate::localize::fundamental_sequence(4);
        let stages = monster_tower(3, &seq).unwrap();
        assert_eq!(stages.len(), 3);
        for (i, s) in stages.iter().enumerate() {
            assert_eq!(s.n as usize, i + 1);
            assert!(s.below_prev && s.below_seq && s.rho_in_prev_cozero);
            assert!(s.oscillation_gap.is_positive());
            assert_eq!(s.rho, Rat::one() / TailFn::pow2(s.n + 1));
        }
        // depth 1 reproduces a single monster build
        let one = monster_tower(1, &seq).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].rho, r(1, 4));
    }

    #[test]
    fn right_accumulating_decay() {
        // plateaus (1/8) * 4^{1-n} on windows shrinking toward 0
        let base = PwlFn::from_points(vec![
            (Rat::zero(), Rat::zero()),
            (r(1, 2), r(1, 8)),
            (Rat::one(), r(1, 8)),
        ])
        .unwrap();
        let g = TailFn::new(
            base,
            Rat::zero(),
            r(1, 2),
            TailSide::Right,
            r(1, 8),
            r(1, 4),
            false,
        )
        .unwrap();
        assert!(g.germ().is_none());
        assert_eq!(g.node(1), r(1, 2));
        assert_eq!(g.node(2), r(1, 4));
        assert_eq!(g.plateau_value(2), r(1, 32));
        // the value-to-abscissa ratio collapses along the plateaus
        let t2 = g.plateau_end(2);
        assert!(&g.eval(&t2) / &t2 < r(1, 4));
        assert_eq!(g.oscillation(), (Rat::zero(), Rat::zero()));
    }

    #[test]
    fn stage_serialization_shape() {
        let b = default_build();
        let js = serde_json::to_value(&b.g).unwrap();
        assert_eq!(js["tail"]["rho"], "1/2");
        assert_eq!(js["tail"]["mu"], "1/4");
        assert_eq!(js["tail"]["plateau"], "1/16");
        assert_eq!(js["tail"]["rule"], "dyadic");
    }
}
