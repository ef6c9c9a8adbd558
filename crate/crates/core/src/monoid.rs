//! The positive function monoid `M` and its order calculus.
//!
//! `M` consists of the nonnegative piecewise-linear functions that are
//! strictly positive on a punctured right-neighbourhood of 0, together
//! with the zero function. The algebraic order `g <=_M f` holds exactly
//! when `f - g` lies in `M` again, so every order verdict carries the
//! difference as a certificate.
//!
//! Strictness repairs transfer a "sliver" — a small multiple of
//! `f0 ∧ r` for a Urysohn cut `r` supported near 0 — between the parts of
//! a decomposition. The sliver has germ `nu * t`, so it restores strict
//! positivity near 0 without disturbing anything global.

use crate::pwl::{Germ, PwlFn};
use crate::rat::Rat;
use crate::rset::{Interval, RSet};
use crate::urysohn::urysohn;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// Why a function fails membership in `M`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MRejection {
    #[error("negative at t={0}")]
    Negative(Rat),
    #[error("vanishes on a right-neighbourhood of 0 (witness t={0}) without being zero")]
    VanishesNearZero(Rat),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("element of M required, got rejection: {0}")]
    NotInM(#[from] MRejection),
    #[error("nonzero element required")]
    ZeroElement,
    #[error("precondition x <=_M y1+y2 fails: {0}")]
    RieszPrecondition(MRejection),
    #[error("{0} is not below {1} in the algebraic order: {2}")]
    NotBelow(PwlFn, PwlFn, MRejection),
    #[error("g is not in N_f: {0}")]
    NotInIdeal(NfRejection),
}

/// Membership certificate: either the zero function, or strict positivity
/// on `(0, eps]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cert {
    Zero,
    Positive { eps: Rat },
}

/// An element of `M`: a nonnegative function with a positivity
/// certificate near 0. Construction goes through [`in_m`], which rejects
/// with a witness point instead of erroring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MElem {
    func: PwlFn,
    cert: Cert,
}

impl MElem {
    pub fn zero() -> MElem {
        MElem { func: PwlFn::constant(Rat::zero()), cert: Cert::Zero }
    }

    pub fn one() -> MElem {
        in_m(&PwlFn::constant(Rat::one())).expect("1 is in M")
    }

    pub fn f0() -> MElem {
        in_m(&PwlFn::identity()).expect("f0 is in M")
    }

    pub fn func(&self) -> &PwlFn {
        &self.func
    }

    pub fn cert(&self) -> &Cert {
        &self.cert
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.cert, Cert::Zero)
    }

    pub fn germ(&self) -> Germ {
        self.func.germ()
    }

    /// `M` is closed under addition.
    pub fn add(&self, other: &MElem) -> MElem {
        in_m(&self.func.add(&other.func)).expect("M is closed under addition")
    }

    /// `M` is closed under scaling by positive rationals.
    pub fn scale(&self, q: &Rat) -> MElem {
        assert!(q.is_positive(), "scale factor must be positive");
        in_m(&self.func.scale(q)).expect("M is closed under positive scaling")
    }

    pub fn cozero(&self) -> RSet {
        self.func.cozero().expect("M elements are nonnegative")
    }
}

impl fmt::Display for MElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.func)
    }
}

// CLI-facing certificate JSON: {"kind":"MElem","fn":"pwl[...]","eps":"1/4"}
impl Serialize for MElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MElem", 3)?;
        s.serialize_field("kind", "MElem")?;
        s.serialize_field("fn", &self.func)?;
        match &self.cert {
            Cert::Zero => s.serialize_field("eps", &Option::<Rat>::None)?,
            Cert::Positive { eps } => s.serialize_field("eps", &Some(eps.clone()))?,
        }
        s.end()
    }
}

/// Decide membership of `f` in `M`. The accepted element carries
/// `eps` = half of the first positive zero abscissa (or 1 when `f` stays
/// positive on all of `(0,1]`), so `(0, eps]` avoids every zero.
pub fn in_m(f: &PwlFn) -> Result<MElem, MRejection> {
    if let Some(w) = f.negative_witness() {
        return Err(MRejection::Negative(w));
    }
    if f.is_zero_fn() {
        return Ok(MElem { func: PwlFn::constant(Rat::zero()), cert: Cert::Zero });
    }
    let zeros = f.zero_set();
    // an initial zero run [0,a] with a > 0 puts zeros in every (0, eps]
    for iv in zeros.intervals() {
        if iv.lo.is_zero() && iv.hi.is_positive() {
            return Err(MRejection::VanishesNearZero(Rat::midpoint(
                &Rat::zero(),
                &iv.hi,
            )));
        }
    }
    let first_positive_zero = zeros
        .intervals()
        .iter()
        .map(|iv| &iv.lo)
        .find(|lo| lo.is_positive())
        .cloned();
    let eps = match first_positive_zero {
        Some(z) => Rat::midpoint(&Rat::zero(), &z),
        None => Rat::one(),
    };
    Ok(MElem { func: f.clone(), cert: Cert::Positive { eps } })
}

/// `g <=_M f`: true exactly when `f - g` passes [`in_m`]; the certificate
/// is that difference.
pub fn alg_leq(g: &MElem, f: &MElem) -> Result<MElem, MRejection> {
    in_m(&f.func.sub(&g.func))
}

pub fn leq(g: &MElem, f: &MElem) -> bool {
    alg_leq(g, f).is_ok()
}

/// Strict algebraic order: `g <_M f`.
pub fn lt(g: &MElem, f: &MElem) -> bool {
    g != f && leq(g, f)
}

/// The order-ideal context `N_f` for a nonzero `f`, with its co-zero set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealCtx {
    f: MElem,
    cozero: RSet,
    below_f0: bool,
}

impl IdealCtx {
    pub fn new(f: MElem) -> Result<IdealCtx, MonoidError> {
        if f.is_zero() {
            return Err(MonoidError::ZeroElement);
        }
        let cozero = f.cozero();
        let below_f0 = leq(&f, &MElem::f0());
        Ok(IdealCtx { f, cozero, below_f0 })
    }

    /// Context for interval work, which additionally requires `f <=_M f0`.
    pub fn new_below_f0(f: MElem) -> Result<IdealCtx, MonoidError> {
        let f0 = MElem::f0();
        if let Err(rej) = alg_leq(&f, &f0) {
            return Err(MonoidError::NotBelow(
                f.func().clone(),
                f0.func().clone(),
                rej,
            ));
        }
        let ctx = IdealCtx::new(f)?;
        Ok(ctx)
    }

    pub fn f(&self) -> &MElem {
        &self.f
    }

    /// The co-zero set `U_f`.
    pub fn u_f(&self) -> &RSet {
        &self.cozero
    }

    pub fn is_below_f0(&self) -> bool {
        self.below_f0
    }

    pub fn f0_ctx() -> IdealCtx {
        IdealCtx::new_below_f0(MElem::f0()).expect("f0 generates an ideal")
    }
}

/// Why `g` fails to lie in `N_f`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NfRejection {
    #[error("g is positive at t={0} where f vanishes")]
    OutsideCozero(Rat),
}

/// Certificate that `g <=_M n*f` with `n` minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfCert {
    pub n: BigInt,
    /// The difference `n*f - g` as an element of `M`.
    pub slack: MElem,
}

impl NfCert {
    pub fn n_u64(&self) -> u64 {
        self.n.to_u64().expect("ideal multiple fits in u64")
    }
}

/// Least `n >= 1` with `g <=_M n*f`, or a rejection witness. The ratio
/// `g/f` is a Möbius function on each merged segment, hence extremal at
/// segment endpoints; a unit increment covers the case where the slack
/// vanishes near 0 without being zero.
pub fn in_nf(g: &MElem, ctx: &IdealCtx) -> Result<NfCert, NfRejection> {
    let f = ctx.f().func();
    let gf = g.func();
    if g.is_zero() {
        let slack = in_m(f).expect("context element is in M");
        return Ok(NfCert { n: BigInt::from(1), slack });
    }
    let mut xs: Vec<Rat> = f.breakpoints().cloned().collect();
    xs.extend(gf.breakpoints().cloned());
    xs.sort();
    xs.dedup();
    let mut max_ratio = Rat::one();
    for x in &xs {
        let fv = f.eval(x);
        let gv = gf.eval(x);
        if fv.is_zero() {
            if gv.is_positive() {
                return Err(NfRejection::OutsideCozero(x.clone()));
            }
            continue;
        }
        let ratio = &gv / &fv;
        if ratio > max_ratio {
            max_ratio = ratio;
        }
    }
    let n0 = max_ratio.ceil_int();
    let mut n = if n0 < BigInt::from(1) { BigInt::from(1) } else { n0 };
    let scaled = f.scale(&Rat::from_bigint(n.clone()));
    match in_m(&scaled.sub(gf)) {
        Ok(slack) => Ok(NfCert { n, slack }),
        Err(MRejection::VanishesNearZero(_)) => {
            n += 1;
            let scaled = f.scale(&Rat::from_bigint(n.clone()));
            let slack = in_m(&scaled.sub(gf))
                .expect("adding one copy of f restores positivity near 0");
            Ok(NfCert { n, slack })
        }
        Err(MRejection::Negative(_)) => {
            unreachable!("n was chosen to dominate the ratio everywhere")
        }
    }
}

/// `g` lies in the canonical interval `D_f = {g in N_f : g <=_M 1}`.
pub fn in_df(g: &MElem, ctx: &IdealCtx) -> bool {
    in_nf(g, ctx).is_ok() && leq(g, &MElem::one())
}

/// The sliver `nu * (f0 ∧ r)` for a Urysohn cut `r` supported on `[0,c)`:
/// equal to `nu*t` on `(0, c/2]`, at most `nu*t` everywhere, zero off
/// `[0, c]`.
pub fn sliver(nu: &Rat, c: &Rat) -> PwlFn {
    assert!(nu.is_positive() && c.is_positive());
    let half = Rat::midpoint(&Rat::zero(), c);
    let k = RSet::interval(Interval::closed(Rat::zero(), half.clone()));
    let v = RSet::interval(Interval::new(Rat::zero(), c.clone(), true, false));
    let cut = urysohn(&k, &v, &half).expect("sliver cut is well nested");
    PwlFn::identity().meet(&cut).scale(nu)
}

/// Largest window `w` such that `F` is linear on `[0, w]` and strictly
/// positive on `(0, w]`. `None` when the germ of `F` is not positive.
pub fn positive_linear_window(f: &PwlFn) -> Option<Rat> {
    let germ = f.germ();
    if !germ.is_positive_near_zero() {
        return None;
    }
    let w = germ.eps.clone();
    let end = germ.value_at(&w);
    if end.is_positive() {
        Some(w)
    } else {
        // the germ line dips to 0 at -lam/mu inside the window
        let root = &(-germ.lam.clone()) / &germ.mu;
        Some(Rat::midpoint(&Rat::zero(), &root))
    }
}

/// Largest admissible sliver slope for subtracting from `F` on support
/// `[0, c]`: keeps `F - sliver` nonnegative there and strictly positive
/// near 0. Requires `F` linear on `[0,c]` and positive on `(0,c]`.
pub fn sliver_bound(f: &PwlFn, c: &Rat) -> Rat {
    let germ = f.germ();
    debug_assert!(c <= &germ.eps);
    if germ.lam.is_zero() {
        // F = mu*t: half the slope
        Rat::midpoint(&Rat::zero(), &germ.mu)
    } else {
        // F has a positive floor min(F(0), F(c)) on [0,c]
        let m = germ.lam.clone().min(germ.value_at(c));
        debug_assert!(m.is_positive());
        &Rat::midpoint(&Rat::zero(), &m) / c
    }
}

/// Exact Riesz decomposition: given `x <=_M y1 + y2`, produce
/// `x = x1 + x2` with `x1 <=_M y1` and `x2 <=_M y2`.
///
/// The lattice split `x1 = x ∧ y1` works except when a difference
/// vanishes identically near 0 without vanishing globally; a sliver
/// transfer from `x1` to `x2` then restores all four memberships at once.
/// Every postcondition is re-verified before returning.
pub fn riesz_decompose(
    x: &MElem,
    y1: &MElem,
    y2: &MElem,
) -> Result<(MElem, MElem), MonoidError> {
    let sum = y1.add(y2);
    let s = match alg_leq(x, &sum) {
        Ok(s) => s,
        Err(rej) => return Err(MonoidError::RieszPrecondition(rej)),
    };

    if x.is_zero() {
        return Ok((MElem::zero(), MElem::zero()));
    }
    if y1.is_zero() {
        return Ok((MElem::zero(), x.clone()));
    }
    if y2.is_zero() {
        return Ok((x.clone(), MElem::zero()));
    }

    let x1_fn = x.func().meet(y1.func());
    let x2_fn = x.func().sub(&x1_fn);
    let x2_ok = in_m(&x2_fn);
    let y1_slack_ok = in_m(&y1.func().sub(&x1_fn));

    let (x1_fn, x2_fn) = if x2_ok.is_ok() && y1_slack_ok.is_ok() {
        (x1_fn, x2_fn)
    } else {
        // strictness repair: move a sliver from x1 to x2
        let y2mx2 = y2.func().sub(&x2_fn);
        let mut c = [x.func(), y1.func(), y2.func(), s.func(), &x1_fn, &y2mx2]
            .iter()
            .map(|f| f.germ().eps)
            .min()
            .unwrap();
        for f in [&x1_fn, &y2mx2] {
            let w = positive_linear_window(f)
                .expect("repair minuends have positive germs");
            c = c.min(w);
        }
        let nu = sliver_bound(&x1_fn, &c).min(sliver_bound(&y2mx2, &c));
        let w = sliver(&nu, &c);
        (x1_fn.sub(&w), x2_fn.add(&w))
    };

    let x1 = in_m(&x1_fn).expect("riesz part x1 lies in M");
    let x2 = in_m(&x2_fn).expect("riesz part x2 lies in M");
    assert_eq!(x1.func().add(x2.func()), *x.func(), "parts recombine exactly");
    alg_leq(&x1, y1).expect("x1 <=_M y1 after repair");
    alg_leq(&x2, y2).expect("x2 <=_M y2 after repair");
    Ok((x1, x2))
}

/// A nonzero common element of `N_f` and `N_g` for nonzero `f, g`:
/// their meet, which is positive near 0 and dominated by `2f` and `2g`.
pub fn prime_witness(f: &MElem, g: &MElem) -> Result<MElem, MonoidError> {
    if f.is_zero() || g.is_zero() {
        return Err(MonoidError::ZeroElement);
    }
    let h = in_m(&f.func().meet(g.func())).expect("meet of M elements is in M");
    debug_assert!(!h.is_zero());
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn f0() -> PwlFn {
        PwlFn::identity()
    }

    fn constant(c: Rat) -> PwlFn {
        PwlFn::constant(c)
    }

    #[test]
    fn in_m_examples() {
        // max(0, 1/2 - t): positive near 0, eps is half the first zero
        let zero = constant(Rat::zero());
        let f = zero.join(&constant(r(1, 2)).sub(&f0()));
        let m = in_m(&f).unwrap();
        match m.cert() {
            Cert::Positive { eps } => assert_eq!(eps, &r(1, 4)),
            Cert::Zero => panic!("expected positive cert"),
        }

        // max(0, t - 1/2): vanishes on (0,1/2), witness at 1/4
        let g = zero.join(&f0().sub(&constant(r(1, 2))));
        assert_eq!(in_m(&g), Err(MRejection::VanishesNearZero(r(1, 4))));

        // zero is a member
        assert!(in_m(&zero).unwrap().is_zero());

        // negative function rejected with witness
        assert!(matches!(in_m(&f0().neg()), Err(MRejection::Negative(_))));
    }

    #[test]
    fn eps_is_largest_safe_choice() {
        // vanishes from 1/2 on but positive near 0: eps = half of 1/2
        let zero = constant(Rat::zero());
        let bump = f0().meet(&zero.join(&constant(r(1, 2)).sub(&f0())));
        let m = in_m(&bump).unwrap();
        match m.cert() {
            Cert::Positive { eps } => assert_eq!(eps, &r(1, 4)),
            _ => panic!(),
        }
        // strictly positive on (0,1]: eps = 1
        let m = in_m(&f0()).unwrap();
        match m.cert() {
            Cert::Positive { eps } => assert_eq!(eps, &Rat::one()),
            _ => panic!(),
        }
    }

    #[test]
    fn alg_leq_examples() {
        let f0m = MElem::f0();
        let two_f0 = f0m.scale(&Rat::int(2));
        let one = MElem::one();
        // f0 <= 2 f0 with certificate f0
        let cert = alg_leq(&f0m, &two_f0).unwrap();
        assert_eq!(cert.func(), f0m.func());
        // f0 <= 1 since 1 - f0 > 0 on (0,1)
        assert!(leq(&f0m, &one));
        // 1 <= f0 fails: difference negative at 0
        assert!(matches!(
            alg_leq(&one, &f0m),
            Err(MRejection::Negative(_))
        ));
    }

    #[test]
    fn in_nf_examples() {
        let ctx = IdealCtx::f0_ctx();
        // g = min(f0, 1/4): ratio max is 1 but the slack vanishes near 0,
        // so the minimal multiple is 2
        let g = in_m(&f0().meet(&constant(r(1, 4)))).unwrap();
        let cert = in_nf(&g, &ctx).unwrap();
        assert_eq!(cert.n, 2.into());
        // minimality: n-1 = 1 fails
        assert!(in_m(&f0().sub(g.func())).is_err());

        // reflexivity gives n = 1
        let cert = in_nf(&ctx.f().clone(), &ctx).unwrap();
        assert_eq!(cert.n, 1.into());

        // constant 1 against a context vanishing somewhere: witness point
        let hatf = in_m(&f0().meet(&constant(Rat::one()).sub(&f0()))).unwrap();
        let hat_ctx = IdealCtx::new(hatf).unwrap();
        let one = MElem::one();
        let rej = in_nf(&one, &hat_ctx).unwrap_err();
        let NfRejection::OutsideCozero(t) = rej;
        assert!(hat_ctx.f().func().eval(&t).is_zero());
        assert!(one.func().eval(&t).is_positive());
    }

    #[test]
    fn in_df_examples() {
        let ctx = IdealCtx::f0_ctx();
        let g = in_m(&f0().meet(&constant(r(1, 4)))).unwrap();
        assert!(in_df(&g, &ctx));
        // 1 is not in D_{f0}: n*f0 vanishes at 0 below 1
        assert!(!in_df(&MElem::one(), &ctx));
        // 0 is in every canonical interval
        assert!(in_df(&MElem::zero(), &ctx));
    }

    #[test]
    fn riesz_trivial_splits() {
        let f0m = MElem::f0();
        let (x1, x2) = riesz_decompose(&f0m, &f0m, &f0m).unwrap();
        assert_eq!(&x1, &f0m);
        assert!(x2.is_zero());

        let one = MElem::one();
        let (x1, x2) = riesz_decompose(&one, &one, &one).unwrap();
        assert_eq!(&x1, &one);
        assert!(x2.is_zero());
    }

    #[test]
    fn riesz_repair_case() {
        // x = f0 + min(f0,1/4) has the same germ as y1 = 2 f0, which forces
        // the sliver repair
        let x = in_m(&f0().add(&f0().meet(&constant(r(1, 4))))).unwrap();
        let y = MElem::f0().scale(&Rat::int(2));
        let (x1, x2) = riesz_decompose(&x, &y, &y).unwrap();
        assert_eq!(x1.func().add(x2.func()), *x.func());
        assert!(leq(&x1, &y));
        assert!(leq(&x2, &y));
        assert!(!x2.is_zero(), "repair moved a nonzero sliver");
    }

    #[test]
    fn riesz_precondition_violation() {
        let big = MElem::one().scale(&Rat::int(3));
        let small = MElem::f0();
        assert!(matches!(
            riesz_decompose(&big, &small, &small),
            Err(MonoidError::RieszPrecondition(_))
        ));
    }

    #[test]
    fn prime_witness_examples() {
        let f0m = MElem::f0();
        let one = MElem::one();
        let h = prime_witness(&f0m, &one).unwrap();
        assert_eq!(h.func(), f0m.func());
        let h = prime_witness(&f0m, &f0m).unwrap();
        assert_eq!(h.func(), f0m.func());

        // both ideals contain the witness
        let g = in_m(&constant(Rat::zero()).join(&constant(r(1, 2)).sub(&f0()))).unwrap();
        let h = prime_witness(&f0m, &g).unwrap();
        assert!(!h.is_zero());
        let ctx_f = IdealCtx::new(f0m).unwrap();
        let ctx_g = IdealCtx::new(g).unwrap();
        assert!(in_nf(&h, &ctx_f).is_ok());
        assert!(in_nf(&h, &ctx_g).is_ok());
    }

    #[test]
    fn sliver_shape() {
        let w = sliver(&r(1, 2), &r(1, 4));
        // nu * t on (0, c/2]
        assert_eq!(w.eval(&r(1, 16)), r(1, 32));
        assert_eq!(w.eval(&r(1, 8)), r(1, 16));
        // zero from c on
        assert_eq!(w.eval(&r(1, 4)), Rat::zero());
        assert_eq!(w.eval(&Rat::one()), Rat::zero());
        // dominated by nu * f0
        let cap = f0().scale(&r(1, 2));
        assert!(crate::pwl::compare(&w, &cap, &RSet::full()).leq);
    }

    #[test]
    fn melem_json_certificate() {
        let g = in_m(&f0().meet(&constant(r(1, 4)))).unwrap();
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(
            js,
            r#"{"kind":"MElem","fn":"pwl[(0,0);(1/4,1/4);(1,1/4)]","eps":"1"}"#
        );
    }
}
