//! Localization classes: complemented intervals over cofinal contexts
//! `f <=_M f0`, compared through restriction to common refinements.
//!
//! A class is an interval representative up to restriction-equivalence;
//! two representatives agree when their sup functions coincide on the
//! co-zero set of a common refinement. The refinement of two bases is
//! half their meet, which sits below both bases and below `f0` in the
//! algebraic order with a strict germ margin.

use crate::interval::{
    in_ifh, IntervalError, IntervalRep, PropCObstruction, RestrictReport, SupFn,
};
use crate::monoid::{
    alg_leq, in_m, in_nf, leq, positive_linear_window, riesz_decompose, sliver, IdealCtx, MElem,
    MonoidError,
};
use crate::monster::TailSide;
use crate::pwl::{compare, PwlFn};
use crate::rat::Rat;
use crate::rset::{Interval, RSet};
use crate::urysohn::urysohn;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Debug, Clone, thiserror::Error)]
pub enum LocError {
    #[error("interval error: {0}")]
    Interval(#[from] IntervalError),
    #[error("monoid error: {0}")]
    Monoid(#[from] MonoidError),
    #[error("property C obstruction: {0}")]
    PropC(String),
    #[error("nonzero class required")]
    ZeroClass,
    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

impl From<PropCObstruction> for LocError {
    fn from(e: PropCObstruction) -> LocError {
        LocError::PropC(e.to_string())
    }
}

/// A localization class, handled through one representative; `None` is
/// the zero class.
#[derive(Debug, Clone)]
pub struct LocalClass {
    rep: Option<IntervalRep>,
}

impl LocalClass {
    pub fn new(rep: IntervalRep) -> LocalClass {
        LocalClass { rep: Some(rep) }
    }

    pub fn zero() -> LocalClass {
        LocalClass { rep: None }
    }

    pub fn from_parts(ctx: IdealCtx, h: SupFn) -> Result<LocalClass, LocError> {
        Ok(LocalClass { rep: Some(IntervalRep::new(ctx, h)?) })
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_none()
    }

    pub fn rep(&self) -> Option<&IntervalRep> {
        self.rep.as_ref()
    }

    fn nonzero_rep(&self) -> Result<&IntervalRep, LocError> {
        self.rep.as_ref().ok_or(LocError::ZeroClass)
    }

    pub fn base(&self) -> &MElem {
        self.rep.as_ref().expect("nonzero class").ctx.f()
    }

    pub fn sup(&self) -> &SupFn {
        &self.rep.as_ref().expect("nonzero class").h
    }
}

/// Common refinement of two bases: half their meet. Sits strictly below
/// both bases and `f0` in the algebraic order.
pub fn refine_bases(a: &MElem, b: &MElem) -> Result<IdealCtx, LocError> {
    let meet = a.func().meet(b.func());
    let half = in_m(&meet.scale(&Rat::new(1, 2)))
        .map_err(|e| LocError::Unsupported(format!("refinement not in M: {e}")))?;
    if half.is_zero() {
        return Err(LocError::ZeroClass);
    }
    debug_assert!(leq(&half, a) && leq(&half, b));
    Ok(IdealCtx::new_below_f0(half)?)
}

/// Equality of two sup functions as functions on `s`, exact.
fn sups_equal_on(h1: &SupFn, h2: &SupFn, s: &RSet) -> Result<bool, LocError> {
    use SupFn::*;
    match (h1, h2) {
        (Pwl(a), Pwl(b)) => Ok(compare(a, b, s).leq && compare(b, a, s).leq),
        (Tail(a), Tail(b)) => {
            if a.is_trivial() && b.is_trivial() {
                return sups_equal_on(&Pwl(a.base().clone()), &Pwl(b.base().clone()), s);
            }
            let same_pattern = a.zone_lo() == b.zone_lo()
                && a.zone_hi() == b.zone_hi()
                && a.side() == b.side()
                && a.hi0() == b.hi0()
                && a.hi_ratio() == b.hi_ratio()
                && a.alternate() == b.alternate();
            if same_pattern {
                let outside = s.intersect(
                    &RSet::interval(Interval::open(a.zone_lo().clone(), a.zone_hi().clone()))
                        .complement(),
                );
                return Ok(compare(a.base(), b.base(), &outside).leq
                    && compare(b.base(), a.base(), &outside).leq);
            }
            match bounded_expansion_region(h1, h2, s) {
                Some(bound) => {
                    let ea = a.expand_up_to(&bound);
                    let eb = b.expand_up_to(&bound);
                    Ok(compare(&ea, &eb, s).leq && compare(&eb, &ea, s).leq)
                }
                None => Ok(false),
            }
        }
        (Pwl(p), Tail(t)) | (Tail(t), Pwl(p)) => {
            if t.is_trivial() {
                return sups_equal_on(&Pwl(p.clone()), &Pwl(t.base().clone()), s);
            }
            if reaches_accum(t, s) {
                // an oscillating tail agrees with no piecewise-linear
                // function on any set approaching its accumulation point
                return Ok(false);
            }
            match bounded_expansion_region(h1, h2, s) {
                Some(bound) => {
                    let e = t.expand_up_to(&bound);
                    Ok(compare(&e, p, s).leq && compare(p, &e, s).leq)
                }
                None => Ok(false),
            }
        }
    }
}

fn reaches_accum(t: &crate::monster::TailFn, s: &RSet) -> bool {
    if t.is_trivial() {
        return false;
    }
    let accum = t.accum();
    s.closure().contains(accum)
        && s.intervals()
            .iter()
            .any(|iv| !iv.is_degenerate() && &iv.lo < accum && &iv.hi >= accum)
}

fn bounded_expansion_region(h1: &SupFn, h2: &SupFn, s: &RSet) -> Option<Rat> {
    let mut bound = Rat::one();
    for h in [h1, h2] {
        if let SupFn::Tail(t) = h {
            if t.is_trivial() {
                continue;
            }
            if t.side() != TailSide::Left {
                return None;
            }
            if reaches_accum(t, s) {
                return None;
            }
            // the set stays below the accumulation point
            let m = s.max()?;
            if m >= t.accum() {
                return None;
            }
            bound = bound.min(Rat::midpoint(m, t.accum()));
        }
    }
    Some(bound)
}

/// Restriction-equivalence: the sup functions agree on the co-zero set of
/// the common refinement of the bases. The zero class is equivalent only
/// to itself: a nonzero sup dominates a positive germ near 0 on every
/// refinement.
pub fn equivalent(c1: &LocalClass, c2: &LocalClass) -> Result<bool, LocError> {
    match (c1.rep(), c2.rep()) {
        (None, None) => Ok(true),
        (None, Some(_)) | (Some(_), None) => Ok(false),
        (Some(r1), Some(r2)) => {
            let refined = refine_bases(r1.ctx.f(), r2.ctx.f())?;
            sups_equal_on(&r1.h, &r2.h, refined.u_f())
        }
    }
}

/// Sum of classes: refine to the common base and add the sup functions.
/// The zero class is neutral.
pub fn add_classes(c1: &LocalClass, c2: &LocalClass) -> Result<LocalClass, LocError> {
    match (c1.rep(), c2.rep()) {
        (None, _) => return Ok(c2.clone()),
        (_, None) => return Ok(c1.clone()),
        (Some(_), Some(_)) => {}
    }
    let refined = refine_bases(c1.base(), c2.base())?;
    let h = match (c1.sup(), c2.sup()) {
        (SupFn::Pwl(a), SupFn::Pwl(b)) => SupFn::Pwl(a.add(b)),
        _ => {
            return Err(LocError::Unsupported(
                "class addition is supported for piecewise-linear sups".into(),
            ))
        }
    };
    LocalClass::from_parts(refined, h)
}

/// Certificate that the class of `[0, f0]` is dominated by `n` copies of
/// a nonzero class: the minimal such `n`, the witness element `g` with
/// germ slope strictly between `1/n` and the class germ slope, the
/// shrunken context `f'`, and the verified containment data.
#[derive(Debug, Clone, Serialize)]
pub struct MinIdealReport {
    pub n: u64,
    pub class_slope: Rat,
    pub witness_slope: Rat,
    #[serde(rename = "g")]
    pub witness: MElem,
    pub f_prime: MElem,
    pub g_in_interval: bool,
    pub f_prime_below_base: bool,
    pub f0_strictly_below_ng: bool,
    pub n_minimal: bool,
    pub riesz_samples_ok: bool,
}

impl MinIdealReport {
    pub fn all_passed(&self) -> bool {
        self.g_in_interval
            && self.f_prime_below_base
            && self.f0_strictly_below_ng
            && self.n_minimal
            && self.riesz_samples_ok
    }
}

/// The unique-minimal-order-ideal certificate: for a nonzero class with
/// sup germ slope `mu` (slope 1 when the sup has a positive floor at 0),
/// the least integer `n` exceeding `1/mu` satisfies
/// `class([0,f0]) <= n * class`, witnessed by an interval element that is
/// a pure germ line near 0 and a context shrunk into that germ window.
pub fn minimal_ideal_dominates(c: &LocalClass) -> Result<MinIdealReport, LocError> {
    let rep = c.nonzero_rep()?;
    let h = &rep.h;
    let germ_h = h
        .germ()
        .ok_or_else(|| LocError::Unsupported("sup with no germ at 0".into()))?;
    if !germ_h.is_positive_near_zero() {
        return Err(LocError::ZeroClass);
    }
    let class_slope = if germ_h.lam.is_positive() { Rat::one() } else { germ_h.mu.clone() };
    // least integer exceeding 1/mu
    let inv = class_slope.recip();
    let n_big = inv.floor_int() + num_bigint::BigInt::from(1);
    let n = n_big.to_u64().expect("ideal multiple fits in u64");
    let n_rat = Rat::from_bigint(n_big);

    // witness slope strictly between 1/n and the class slope
    let witness_slope = Rat::midpoint(&n_rat.recip(), &class_slope);
    // support window: the germ must fit under h there
    let germ_line = PwlFn::constant(germ_h.lam.clone())
        .add(&PwlFn::identity().scale(&germ_h.mu));
    let margin = germ_line.sub(&PwlFn::identity().scale(&witness_slope));
    let window = positive_linear_window(&margin)
        .ok_or_else(|| LocError::Unsupported("no germ room under the sup".into()))?
        .min(germ_h.eps.clone());
    let sup_window = match h {
        SupFn::Tail(t) if !t.is_trivial() && t.side() == TailSide::Left => {
            window.min(t.zone_lo().clone())
        }
        _ => window,
    };
    let c_supp = Rat::midpoint(&Rat::zero(), &sup_window);
    let g_fn = sliver(&witness_slope, &c_supp);
    let g = in_m(&g_fn).expect("germ witness is in M");
    let g_in_interval = in_ifh(&g, &rep.ctx, h)?.member;

    // f' below the base with co-zero set inside the exact-germ region
    let eps_prime = Rat::midpoint(&Rat::zero(), &Rat::midpoint(&Rat::zero(), &c_supp));
    let base = c.base();
    let tent_k = RSet::interval(Interval::closed(
        Rat::zero(),
        Rat::midpoint(&Rat::zero(), &eps_prime),
    ));
    let tent_v = RSet::interval(Interval::new(Rat::zero(), eps_prime.clone(), true, false));
    let tent = urysohn(&tent_k, &tent_v, &(base.func().max_value() + Rat::one()))
        .map_err(|e| LocError::Unsupported(e.to_string()))?;
    let f_prime = in_m(&base.func().meet(&tent).scale(&Rat::new(1, 2)))
        .expect("shrunken context is in M");
    let f_prime_below_base = leq(&f_prime, base) && !f_prime.is_zero();

    // f0 strictly below n*g on the punctured co-zero set of f'
    let fp_cozero = f_prime.cozero();
    let ng = g.func().scale(&n_rat);
    let f0_strictly_below_ng = compare(&PwlFn::identity(), &ng, &fp_cozero).strict;

    // minimality: (n-1) * slope <= 1
    let n_minimal = if n == 1 {
        true
    } else {
        &Rat::from_bigint((n - 1).into()) * &witness_slope <= Rat::one()
            && &(&n_rat * &witness_slope) > &Rat::one()
    };

    // interval identity samples: split w <= n*slope*f0 into a part below
    // f0 and a part below (n*slope - 1)*f0 ... at the germ level the sum
    // telescopes, so the Riesz split must succeed on samples from N_{f'}
    let fp_ctx = IdealCtx::new(f_prime.clone())?;
    let y_top = in_m(&ng).expect("n*g is in M");
    let mut riesz_samples_ok = true;
    for denom in [2i64, 3, 5] {
        let sample = in_m(
            &f_prime
                .func()
                .meet(&ng)
                .scale(&Rat::new(1, denom)),
        )
        .expect("sample is in M");
        if sample.is_zero() {
            continue;
        }
        if in_nf(&sample, &fp_ctx).is_err() {
            riesz_samples_ok = false;
            continue;
        }
        let half = in_m(&y_top.func().scale(&Rat::new(1, 2))).expect("halved bound in M");
        match riesz_decompose(&sample, &half, &half) {
            Ok((w1, w2)) => {
                riesz_samples_ok &= leq(&w1, &half) && leq(&w2, &half);
            }
            Err(_) => riesz_samples_ok = false,
        }
    }

    Ok(MinIdealReport {
        n,
        class_slope,
        witness_slope,
        witness: g,
        f_prime,
        g_in_interval,
        f_prime_below_base,
        f0_strictly_below_ng,
        n_minimal,
        riesz_samples_ok,
    })
}

/// A decreasing chain `f0 = f_0 >=_M f_1 >=_M ...` with
/// `cozero(f_n) = (0, 1/(n+1))` for `n >= 1`.
#[derive(Debug, Clone)]
pub struct FundamentalSeq {
    elems: Vec<MElem>,
}

impl FundamentalSeq {
    pub fn elems(&self) -> &[MElem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// Build the fundamental sequence `f_0, ..., f_k`: each stage is half the
/// meet of the previous stage with a Urysohn tent supported on
/// `[0, 1/(n+1))`, which pins the co-zero set exactly.
pub fn fundamental_sequence(k: u32) -> FundamentalSeq {
    let mut elems = vec![MElem::f0()];
    for n in 1..=k {
        let prev = elems.last().unwrap().clone();
        let end = Rat::new(1, (n + 1) as i64);
        let tent_k = RSet::interval(Interval::closed(
            Rat::zero(),
            Rat::midpoint(&Rat::zero(), &end),
        ));
        let tent_v = RSet::interval(Interval::new(Rat::zero(), end.clone(), true, false));
        let tent = urysohn(&tent_k, &tent_v, &(prev.func().max_value() + Rat::one()))
            .expect("tent is well nested");
        let next = in_m(&prev.func().meet(&tent).scale(&Rat::new(1, 2)))
            .expect("sequence elements are in M");
        debug_assert!(leq(&next, &prev));
        debug_assert_eq!(
            next.cozero(),
            RSet::interval(Interval::open(Rat::zero(), end))
        );
        elems.push(next);
    }
    FundamentalSeq { elems }
}

/// Exact verification rows for a fundamental sequence, used by the suite.
pub fn verify_fundamental_sequence(seq: &FundamentalSeq) -> bool {
    let elems = seq.elems();
    if elems.is_empty() || elems[0].func() != &PwlFn::identity() {
        return false;
    }
    for n in 1..elems.len() {
        if alg_leq(&elems[n], &elems[n - 1]).is_err() {
            return false;
        }
        let expect = RSet::interval(Interval::open(
            Rat::zero(),
            Rat::new(1, (n + 1) as i64),
        ));
        if elems[n].cozero() != expect {
            return false;
        }
        if !elems[n].germ().is_positive_near_zero() {
            return false;
        }
    }
    true
}

/// Restrict a class representative to a smaller base, with the
/// commutativity report.
pub fn restrict_class(
    c: &LocalClass,
    new_base: &MElem,
    eps: &Rat,
) -> Result<(LocalClass, RestrictReport), LocError> {
    let source = c.nonzero_rep()?;
    if alg_leq(new_base, c.base()).is_err() {
        return Err(LocError::Unsupported(
            "restriction base must sit below the class base".into(),
        ));
    }
    let ctx = IdealCtx::new_below_f0(new_base.clone())?;
    let (rep, report) = crate::interval::restrict_interval(&ctx, source, eps)?;
    Ok((LocalClass::new(rep), report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn f0_class(h: SupFn) -> LocalClass {
        LocalClass::from_parts(IdealCtx::f0_ctx(), h).unwrap()
    }

    #[test]
    fn equivalence_examples() {
        let one = SupFn::constant(Rat::one());
        let c = f0_class(one.clone());
        assert!(equivalent(&c, &c).unwrap());

        // same sup over f0 and over a base with co-zero (0, 1/2); halving
        // the hat keeps a strict germ margin below f0
        let hat = PwlFn::identity().meet(
            &PwlFn::constant(Rat::zero())
                .join(&PwlFn::constant(r(1, 2)).sub(&PwlFn::identity())),
        );
        let small_base = in_m(&hat.scale(&r(1, 2))).unwrap();
        let c2 = LocalClass::from_parts(
            IdealCtx::new_below_f0(small_base).unwrap(),
            one.clone(),
        )
        .unwrap();
        assert!(equivalent(&c, &c2).unwrap());

        // h = 1 vs h = f0 differ on every refinement
        let cf0 = f0_class(SupFn::Pwl(PwlFn::identity()));
        assert!(!equivalent(&c, &cf0).unwrap());
    }

    #[test]
    fn class_addition() {
        let one = f0_class(SupFn::constant(Rat::one()));
        // the zero class is neutral
        let same = add_classes(&one, &LocalClass::zero()).unwrap();
        assert!(equivalent(&same, &one).unwrap());
        assert!(equivalent(&LocalClass::zero(), &LocalClass::zero()).unwrap());
        assert!(!equivalent(&LocalClass::zero(), &one).unwrap());

        let zero_sum = add_classes(&one, &one).unwrap();
        match zero_sum.sup() {
            SupFn::Pwl(p) => assert_eq!(p, &PwlFn::constant(Rat::int(2))),
            _ => panic!(),
        }
        // commutativity up to equivalence
        let cf0 = f0_class(SupFn::Pwl(PwlFn::identity()));
        let ab = add_classes(&one, &cf0).unwrap();
        let ba = add_classes(&cf0, &one).unwrap();
        assert!(equivalent(&ab, &ba).unwrap());
    }

    #[test]
    fn minimal_ideal_examples() {
        // h = f0 over f0: class slope 1, n = 2
        let c = f0_class(SupFn::Pwl(PwlFn::identity()));
        let rep = minimal_ideal_dominates(&c).unwrap();
        assert_eq!(rep.n, 2);
        assert_eq!(rep.class_slope, Rat::one());
        assert!(rep.all_passed());

        // the order-unit class h = 1: germ floor, slope 1, n = 2
        let c = f0_class(SupFn::constant(Rat::one()));
        let rep = minimal_ideal_dominates(&c).unwrap();
        assert_eq!(rep.n, 2);
        assert!(rep.all_passed());

        // slope 1/4 capped: least integer exceeding 4 is 5
        let capped = PwlFn::identity()
            .scale(&r(1, 4))
            .meet(&PwlFn::constant(r(1, 8)));
        let c = f0_class(SupFn::Pwl(capped));
        let rep = minimal_ideal_dominates(&c).unwrap();
        assert_eq!(rep.n, 5);
        assert!(rep.all_passed());
    }

    #[test]
    fn fundamental_sequence_examples() {
        let seq = fundamental_sequence(3);
        assert_eq!(seq.len(), 4);
        assert!(verify_fundamental_sequence(&seq));
        let elems = seq.elems();
        assert_eq!(elems[1].cozero().to_string(), "{(0,1/2)}");
        assert_eq!(elems[2].cozero().to_string(), "{(0,1/3)}");
        assert_eq!(elems[3].cozero().to_string(), "{(0,1/4)}");
        // strictly decreasing chain of co-zero sets
        for w in elems.windows(2) {
            let a = w[0].cozero();
            let b = w[1].cozero();
            assert!(b.is_subset_of(&a) && a != b);
        }
    }

    #[test]
    fn restriction_compatibility() {
        let c = f0_class(SupFn::constant(Rat::one()));
        let seq = fundamental_sequence(2);
        let small = &seq.elems()[2];
        let (restricted, report) = restrict_class(&c, small, &r(1, 16)).unwrap();
        assert!(report.commutes);
        assert!(equivalent(&c, &restricted).unwrap());
    }
}
