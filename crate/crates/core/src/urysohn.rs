//! Urysohn functions on `[0,1]`, derivation trees, and the generator for
//! the countable function group used everywhere else.
//!
//! `urysohn(K, V, rho)` produces the canonical plateau function: `rho` on
//! a deterministic fattening `U` of `K`, zero outside `V`, linear ramps in
//! between. Each boundary point of `K` is fattened toward its matching
//! component boundary of `V` by half the local gap, which pins down the
//! output exactly.

use crate::pwl::{compare, Germ, PwlFn};
use crate::rat::Rat;
use crate::rset::RSet;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UrysohnError {
    #[error("K is not relatively closed: {0}")]
    KNotClosed(RSet),
    #[error("V is not relatively open: {0}")]
    VNotOpen(RSet),
    #[error("K is not contained in V (K={k}, V={v})")]
    NotNested { k: RSet, v: RSet },
    #[error("plateau height must be positive, got {0}")]
    NonPositiveHeight(Rat),
    #[error("malformed derivation term `{0}`")]
    Parse(String),
}

/// The canonical Urysohn function together with its plateau set `U`.
///
/// Postconditions (all exact): `0 <= r <= rho` on `[0,1]`, `r = rho` on
/// `U`, `r = 0` off `V`, and `K ⊆ U ⊆ V` with `U` relatively open.
pub fn urysohn_full(k: &RSet, v: &RSet, rho: &Rat) -> Result<(PwlFn, RSet), UrysohnError> {
    if !rho.is_positive() {
        return Err(UrysohnError::NonPositiveHeight(rho.clone()));
    }
    if !k.is_relatively_closed() {
        return Err(UrysohnError::KNotClosed(k.clone()));
    }
    if !v.is_relatively_open() {
        return Err(UrysohnError::VNotOpen(v.clone()));
    }
    if k.is_empty() {
        return Ok((PwlFn::constant(Rat::zero()), RSet::empty()));
    }
    if !k.is_subset_of(v) {
        return Err(UrysohnError::NotNested { k: k.clone(), v: v.clone() });
    }

    let mut pts: Vec<(Rat, Rat)> = Vec::new();
    let mut plateau = Vec::new();
    let push = |pts: &mut Vec<(Rat, Rat)>, x: Rat, y: Rat| {
        if let Some(last) = pts.last() {
            if last.0 == x {
                assert_eq!(last.1, y, "conflicting urysohn breakpoint at {x}");
                return;
            }
        }
        pts.push((x, y));
    };

    for comp in v.intervals() {
        let inside = k.intersect(&RSet::interval(comp.clone()));
        if inside.is_empty() {
            continue;
        }
        // hull of the K-components living in this V-component
        let a = inside.min().unwrap().clone();
        let b = inside.max().unwrap().clone();
        // a ramp anchor exists where the V-component has a genuine relative
        // boundary point; at an included space edge the plateau extends
        let left_anchor = !comp.contains(&comp.lo);
        let right_anchor = !comp.contains(&comp.hi);
        let u_lo = if left_anchor { Rat::midpoint(&a, &comp.lo) } else { comp.lo.clone() };
        let u_hi = if right_anchor { Rat::midpoint(&b, &comp.hi) } else { comp.hi.clone() };
        if left_anchor {
            push(&mut pts, comp.lo.clone(), Rat::zero());
        }
        push(&mut pts, u_lo.clone(), rho.clone());
        push(&mut pts, u_hi.clone(), rho.clone());
        if right_anchor {
            push(&mut pts, comp.hi.clone(), Rat::zero());
        }
        plateau.push(crate::rset::Interval::new(u_lo, u_hi, !left_anchor, !right_anchor));
    }

    if pts.first().map(|(x, _)| !x.is_zero()).unwrap_or(true) {
        pts.insert(0, (Rat::zero(), Rat::zero()));
    }
    if pts.last().map(|(x, _)| x != &Rat::one()).unwrap_or(true) {
        pts.push((Rat::one(), Rat::zero()));
    }
    let r = PwlFn::from_points(pts).expect("urysohn assembly is ordered");
    Ok((r, RSet::from_intervals(plateau)))
}

/// `urysohn_full` without the plateau set.
pub fn urysohn(k: &RSet, v: &RSet, rho: &Rat) -> Result<PwlFn, UrysohnError> {
    urysohn_full(k, v, rho).map(|(r, _)| r)
}

/// Local form `f = lam + mu * f0` on `[0, eps]`, with `eps` the first
/// breakpoint abscissa. Total for every piecewise-linear function.
pub fn local_form_at_zero(f: &PwlFn) -> Germ {
    f.germ()
}

/// A formal term over the group generators. Replaying a derivation
/// reproduces its function bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    F0,
    Const(Rat),
    Urysohn { k: RSet, v: RSet, rho: Rat },
    Add(Box<Derivation>, Box<Derivation>),
    Sub(Box<Derivation>, Box<Derivation>),
    Scale(Rat, Box<Derivation>),
    Meet(Box<Derivation>, Box<Derivation>),
    Join(Box<Derivation>, Box<Derivation>),
}

impl Derivation {
    pub fn replay(&self) -> Result<PwlFn, UrysohnError> {
        Ok(match self {
            Derivation::F0 => PwlFn::identity(),
            Derivation::Const(c) => PwlFn::constant(c.clone()),
            Derivation::Urysohn { k, v, rho } => urysohn(k, v, rho)?,
            Derivation::Add(a, b) => a.replay()?.add(&b.replay()?),
            Derivation::Sub(a, b) => a.replay()?.sub(&b.replay()?),
            Derivation::Scale(q, a) => a.replay()?.scale(q),
            Derivation::Meet(a, b) => a.replay()?.meet(&b.replay()?),
            Derivation::Join(a, b) => a.replay()?.join(&b.replay()?),
        })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::F0 => write!(f, "f0"),
            Derivation::Const(c) => write!(f, "const({c})"),
            Derivation::Urysohn { k, v, rho } => write!(f, "ury({k},{v},{rho})"),
            Derivation::Add(a, b) => write!(f, "add({a},{b})"),
            Derivation::Sub(a, b) => write!(f, "sub({a},{b})"),
            Derivation::Scale(q, a) => write!(f, "scale({q},{a})"),
            Derivation::Meet(a, b) => write!(f, "meet({a},{b})"),
            Derivation::Join(a, b) => write!(f, "join({a},{b})"),
        }
    }
}

impl FromStr for Derivation {
    type Err = UrysohnError;

    fn from_str(s: &str) -> Result<Derivation, UrysohnError> {
        let mut p = TermParser { input: s, pos: 0 };
        let term = p.term()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(UrysohnError::Parse(s.to_string()));
        }
        Ok(term)
    }
}

struct TermParser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> TermParser<'a> {
    fn fail(&self) -> UrysohnError {
        UrysohnError::Parse(self.input.to_string())
    }

    fn skip_ws(&mut self) {
        while self.input[self.pos..].starts_with(' ') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> Result<(), UrysohnError> {
        self.skip_ws();
        if self.input[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.fail())
        }
    }

    /// Consume characters up to the next top-level `,` or `)`.
    fn chunk(&mut self) -> &'a str {
        let start = self.pos;
        let mut depth = 0usize;
        for (i, c) in self.input[start..].char_indices() {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' if depth == 0 => {
                    self.pos = start + i;
                    return &self.input[start..self.pos];
                }
                ')' | ']' | '}' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    self.pos = start + i;
                    return &self.input[start..self.pos];
                }
                _ => {}
            }
        }
        self.pos = self.input.len();
        &self.input[start..]
    }

    fn term(&mut self) -> Result<Derivation, UrysohnError> {
        self.skip_ws();
        let rest = &self.input[self.pos..];
        let head_end = rest.find(['(', ',', ')']).unwrap_or(rest.len());
        let head = rest[..head_end].trim();
        match head {
            "f0" => {
                self.pos += head_end;
                Ok(Derivation::F0)
            }
            "const" => {
                self.pos += head_end;
                self.eat("(")?;
                let c = self.chunk().trim().parse().map_err(|_| self.fail())?;
                self.eat(")")?;
                Ok(Derivation::Const(c))
            }
            "ury" => {
                self.pos += head_end;
                self.eat("(")?;
                let k = self.chunk().trim().parse().map_err(|_| self.fail())?;
                self.eat(",")?;
                let v = self.chunk().trim().parse().map_err(|_| self.fail())?;
                self.eat(",")?;
                let rho = self.chunk().trim().parse().map_err(|_| self.fail())?;
                self.eat(")")?;
                Ok(Derivation::Urysohn { k, v, rho })
            }
            "scale" => {
                self.pos += head_end;
                self.eat("(")?;
                let q = self.chunk().trim().parse().map_err(|_| self.fail())?;
                self.eat(",")?;
                let a = self.term()?;
                self.eat(")")?;
                Ok(Derivation::Scale(q, Box::new(a)))
            }
            "add" | "sub" | "meet" | "join" => {
                self.pos += head_end;
                self.eat("(")?;
                let a = Box::new(self.term()?);
                self.eat(",")?;
                let b = Box::new(self.term()?);
                self.eat(")")?;
                Ok(match head {
                    "add" => Derivation::Add(a, b),
                    "sub" => Derivation::Sub(a, b),
                    "meet" => Derivation::Meet(a, b),
                    _ => Derivation::Join(a, b),
                })
            }
            _ => Err(self.fail()),
        }
    }
}

/// A generated group element: the function together with the derivation
/// that produced it.
#[derive(Debug, Clone)]
pub struct GElem {
    pub func: PwlFn,
    pub derivation: Derivation,
    pub level: u32,
}

/// Dyadic ball pairs for the generator: each pair is a ball `U` and its
/// concentric half ball `V`, keeping only pairs with `0 ∈ V` or `0`
/// interior to the complement of `U`.
fn dyadic_ball_pairs(budget: usize) -> Vec<(RSet, RSet)> {
    let mut out = Vec::new();
    let mut level: u32 = 1;
    while out.len() < budget && level <= 16 {
        let den = Rat::int(1 << level);
        let fine = Rat::int(1 << (level + 1));
        for k in 0..=(1i64 << level) {
            if k == 1 {
                // 0 sits on the closure boundary of U: excluded
                continue;
            }
            if out.len() >= budget {
                break;
            }
            let kk = Rat::int(k);
            let clip = |x: Rat| x.max(Rat::zero()).min(Rat::one());
            let u_lo = clip(&(&kk - &Rat::one()) / &den);
            let u_hi = clip(&(&kk + &Rat::one()) / &den);
            let v_lo = clip(&(&(&kk * &Rat::int(2)) - &Rat::one()) / &fine);
            let v_hi = clip(&(&(&kk * &Rat::int(2)) + &Rat::one()) / &fine);
            let u = RSet::interval(crate::rset::Interval::new(
                u_lo.clone(),
                u_hi.clone(),
                u_lo.is_zero(),
                u_hi == Rat::one(),
            ));
            let v_open = RSet::interval(crate::rset::Interval::new(
                v_lo.clone(),
                v_hi.clone(),
                v_lo.is_zero(),
                v_hi == Rat::one(),
            ));
            if v_open.is_empty() || u.is_empty() {
                continue;
            }
            out.push((u, v_open));
        }
        level += 1;
    }
    out
}

fn small_rat(rng: &mut StdRng) -> Rat {
    let den = [1i64, 2, 3, 4, 8][rng.gen_range(0..5)];
    let num = rng.gen_range(-3 * den..=3 * den);
    Rat::new(num, den)
}

fn nonzero_small_rat(rng: &mut StdRng) -> Rat {
    loop {
        let q = small_rat(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Enumerate the inductive hierarchy `G_1 ⊆ G_2 ⊆ ...` up to `depth`,
/// seeded and fully deterministic. Level 1 is the rational span of the
/// Urysohn generators together with `f0` and `1`; each further level adds
/// lattice words and rational combinations of earlier elements.
pub fn generate_g(depth: u32, ball_budget: usize, seed: u64) -> Vec<GElem> {
    assert!(depth >= 1, "depth must be at least 1");
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: Vec<GElem> = Vec::new();

    fn emit(out: &mut Vec<GElem>, d: Derivation, level: u32) {
        let func = d.replay().expect("generator derivations replay");
        out.push(GElem { func, derivation: d, level });
    }

    emit(&mut out, Derivation::F0, 1);
    emit(&mut out, Derivation::Const(Rat::one()), 1);
    for (u, v_open) in dyadic_ball_pairs(ball_budget) {
        emit(
            &mut out,
            Derivation::Urysohn { k: v_open.closure(), v: u, rho: Rat::one() },
            1,
        );
    }
    let level1_end = out.len();
    // rational span samples of the level-1 generators
    for _ in 0..ball_budget / 2 {
        let i = rng.gen_range(0..level1_end);
        let j = rng.gen_range(0..level1_end);
        let d = Derivation::Add(
            Box::new(Derivation::Scale(
                nonzero_small_rat(&mut rng),
                Box::new(out[i].derivation.clone()),
            )),
            Box::new(Derivation::Scale(
                nonzero_small_rat(&mut rng),
                Box::new(out[j].derivation.clone()),
            )),
        );
        emit(&mut out, d, 1);
    }

    for level in 2..=depth {
        // the canonical lattice word first: meet(f0, 1 - f0)
        if level == 2 {
            let d = Derivation::Meet(
                Box::new(Derivation::F0),
                Box::new(Derivation::Sub(
                    Box::new(Derivation::Const(Rat::one())),
                    Box::new(Derivation::F0),
                )),
            );
            emit(&mut out, d, level);
        }
        let prev_end = out.len();
        for _ in 0..ball_budget {
            let i = rng.gen_range(0..prev_end);
            let j = rng.gen_range(0..prev_end);
            let a = Box::new(out[i].derivation.clone());
            let b = Box::new(out[j].derivation.clone());
            let d = if rng.gen_bool(0.5) {
                Derivation::Meet(a, b)
            } else {
                Derivation::Join(a, b)
            };
            emit(&mut out, d, level);
        }
        for _ in 0..ball_budget / 2 {
            let i = rng.gen_range(0..out.len());
            let j = rng.gen_range(0..out.len());
            let d = Derivation::Sub(
                Box::new(Derivation::Scale(
                    nonzero_small_rat(&mut rng),
                    Box::new(out[i].derivation.clone()),
                )),
                Box::new(Derivation::Scale(
                    nonzero_small_rat(&mut rng),
                    Box::new(out[j].derivation.clone()),
                )),
            );
            emit(&mut out, d, level);
        }
    }
    out
}

/// One row of the group-property report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckRow {
    pub check: String,
    pub passed: bool,
    pub precondition_violated: bool,
    pub detail: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct GroupReport {
    pub rows: Vec<CheckRow>,
}

impl GroupReport {
    pub fn failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| !r.passed && !r.precondition_violated)
            .count()
    }

    fn push(&mut self, check: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.rows.push(CheckRow {
            check: check.into(),
            passed,
            precondition_violated: false,
            detail: detail.into(),
        });
    }
}

/// Check the defining properties of the group on a finite sample:
/// (i) closure of one round of add/scale/meet/join,
/// (ii) presence and shape of `f0`,
/// (iii) a local form `lam + mu*f0` at 0 for every element,
/// (iv) Urysohn richness over a grid of `(K, V, rho)` triples.
pub fn verify_group_properties(
    sample: &[GElem],
    urysohn_grid: &[(RSet, RSet, Rat)],
) -> GroupReport {
    let mut report = GroupReport { rows: Vec::new() };

    // (i) one closure round: results still satisfy every representation
    // invariant
    for w in sample.windows(2) {
        let (f, g) = (&w[0].func, &w[1].func);
        let results = [
            ("add", f.add(g)),
            ("scale", f.scale(&Rat::new(3, 2))),
            ("meet", f.meet(g)),
            ("join", g.join(f)),
        ];
        for (name, h) in results {
            let ok = PwlFn::from_points(h.points().to_vec()).as_ref() == Ok(&h);
            report.push(format!("closure/{name}"), ok, h.to_string());
        }
    }

    // (ii) f0
    let f0 = PwlFn::identity();
    let present = sample.iter().any(|e| e.func == f0);
    let zero_at_zero = f0.eval(&Rat::zero()).is_zero();
    let pos_off_zero = f0
        .cozero()
        .map(|u| u == "{(0,1]}".parse::<RSet>().unwrap())
        .unwrap_or(false);
    report.push(
        "f0/shape",
        present && zero_at_zero && pos_off_zero,
        "f0(0)=0 and f0>0 on (0,1]",
    );

    // (iii) local forms
    for e in sample {
        let germ = local_form_at_zero(&e.func);
        let line = PwlFn::constant(germ.lam.clone()).add(&PwlFn::identity().scale(&germ.mu));
        let window = RSet::interval(crate::rset::Interval::closed(
            Rat::zero(),
            germ.eps.clone(),
        ));
        let c1 = compare(&e.func, &line, &window);
        let c2 = compare(&line, &e.func, &window);
        report.push(
            "local_form",
            c1.leq && c2.leq && germ.eps.is_positive(),
            format!("lam={} mu={} eps={}", germ.lam, germ.mu, germ.eps),
        );
    }

    // (iv) Urysohn grid
    for (k, v, rho) in urysohn_grid {
        match urysohn_full(k, v, rho) {
            Err(e) => report.rows.push(CheckRow {
                check: "urysohn".into(),
                passed: false,
                precondition_violated: true,
                detail: e.to_string(),
            }),
            Ok((r, u)) => {
                let ok = check_urysohn_postconditions(&r, &u, k, v, rho);
                report.push("urysohn", ok, format!("K={k} V={v} rho={rho} U={u}"));
            }
        }
    }

    report
}

/// Exact postcondition check used by tests and the group report.
pub fn check_urysohn_postconditions(r: &PwlFn, u: &RSet, k: &RSet, v: &RSet, rho: &Rat) -> bool {
    let zero = PwlFn::constant(Rat::zero());
    let cap = PwlFn::constant(rho.clone());
    let full = RSet::full();
    let bounds = compare(&zero, r, &full).leq && compare(r, &cap, &full).leq;
    let plateau = if k.is_empty() {
        u.is_empty()
    } else {
        let c1 = compare(r, &cap, u);
        let c2 = compare(&cap, r, u);
        c1.leq && c2.leq && k.is_subset_of(u) && u.is_subset_of(v) && u.is_relatively_open()
    };
    let off = v.complement();
    let vanish = compare(r, &zero, &off).leq && compare(&zero, r, &off).leq;
    bounds && plateau && vanish
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn urysohn_half_gap_example() {
        // K=[1/4,1/2], V=(1/8,3/4), rho=1: plateau on (3/16,5/8), zero off V
        let k: RSet = "{[1/4,1/2]}".parse().unwrap();
        let v: RSet = "{(1/8,3/4)}".parse().unwrap();
        let (f, u) = urysohn_full(&k, &v, &Rat::one()).unwrap();
        assert_eq!(u.to_string(), "{(3/16,5/8)}");
        assert_eq!(f.eval(&r(3, 16)), Rat::one());
        assert_eq!(f.eval(&r(5, 8)), Rat::one());
        assert_eq!(f.eval(&r(1, 8)), Rat::zero());
        assert_eq!(f.eval(&r(3, 4)), Rat::zero());
        // ramps are linear: midpoint of [1/8, 3/16] maps to 1/2
        assert_eq!(f.eval(&r(5, 32)), r(1, 2));
        assert!(check_urysohn_postconditions(&f, &u, &k, &v, &Rat::one()));
    }

    #[test]
    fn urysohn_degenerate_cases() {
        let full = RSet::full();
        let (f, u) = urysohn_full(&full, &full, &Rat::one()).unwrap();
        assert_eq!(f, PwlFn::constant(Rat::one()));
        assert_eq!(u, full);

        let (f, u) = urysohn_full(&RSet::empty(), &full, &Rat::one()).unwrap();
        assert_eq!(f, PwlFn::constant(Rat::zero()));
        assert!(u.is_empty());

        let k: RSet = "{[1/2,3/4]}".parse().unwrap();
        let v: RSet = "{(0,1/4)}".parse().unwrap();
        assert!(matches!(
            urysohn(&k, &v, &Rat::one()),
            Err(UrysohnError::NotNested { .. })
        ));
    }

    #[test]
    fn urysohn_multiple_components() {
        let k: RSet = "{[1/8,3/16];[3/8,1/2];[7/8,1]}".parse().unwrap();
        let v: RSet = "{(1/16,5/8);(3/4,1]}".parse().unwrap();
        let rho = r(1, 2);
        let (f, u) = urysohn_full(&k, &v, &rho).unwrap();
        assert!(check_urysohn_postconditions(&f, &u, &k, &v, &rho));
        // two K components share the first V component: no dip between them
        assert_eq!(f.eval(&r(5, 16)), rho);
        // right component reaches the space edge: plateau extends to 1
        assert_eq!(f.eval(&Rat::one()), rho);
    }

    #[test]
    fn local_form_examples() {
        let g = local_form_at_zero(&PwlFn::identity());
        assert_eq!((g.lam, g.mu, g.eps), (Rat::zero(), Rat::one(), Rat::one()));
        let g = local_form_at_zero(&PwlFn::constant(Rat::one()));
        assert_eq!((g.lam, g.mu, g.eps), (Rat::one(), Rat::zero(), Rat::one()));
        let f: PwlFn = "pwl[(0,1/2);(1/4,1/2);(1,0)]".parse().unwrap();
        let g = local_form_at_zero(&f);
        assert_eq!((g.lam, g.mu, g.eps), (r(1, 2), Rat::zero(), r(1, 4)));
    }

    #[test]
    fn local_form_is_additive() {
        // lambda and mu add under addition of functions
        let sample = generate_g(2, 8, 11);
        for pair in sample.windows(2) {
            let (f, g) = (&pair[0].func, &pair[1].func);
            let sum = f.add(g);
            let (a, b, s) = (f.germ(), g.germ(), sum.germ());
            assert_eq!(s.lam, &a.lam + &b.lam);
            assert_eq!(s.mu, &a.mu + &b.mu);
        }
    }

    #[test]
    fn derivation_round_trip() {
        let terms = [
            "f0",
            "const(1)",
            "const(-3/7)",
            "meet(f0,sub(const(1),f0))",
            "scale(1/2,add(f0,f0))",
            "ury({[1/4,1/2]},{(1/8,3/4)},1)",
            "join(ury({[0,1/8]},{[0,1/4)},1/2),f0)",
        ];
        for s in terms {
            let d: Derivation = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
            d.replay().unwrap();
        }
        assert!("frob(f0)".parse::<Derivation>().is_err());
        assert!("meet(f0".parse::<Derivation>().is_err());
    }

    #[test]
    fn derivation_replay_is_exact() {
        let d: Derivation = "meet(f0,sub(const(1),f0))".parse().unwrap();
        let f = d.replay().unwrap();
        assert_eq!(f.to_string(), "pwl[(0,0);(1/2,1/2);(1,0)]");
    }

    #[test]
    fn generator_hierarchy() {
        let sample = generate_g(2, 12, 7);
        assert!(sample.iter().any(|e| e.func == PwlFn::identity()));
        assert!(sample.iter().any(|e| e.func == PwlFn::constant(Rat::one())));
        // the canonical hat appears by level 2
        let hat: PwlFn = "pwl[(0,0);(1/2,1/2);(1,0)]".parse().unwrap();
        assert!(sample.iter().any(|e| e.func == hat && e.level == 2));
        // replay every derivation bit-exactly
        for e in &sample {
            assert_eq!(e.derivation.replay().unwrap(), e.func);
        }
        // determinism
        let again = generate_g(2, 12, 7);
        assert_eq!(again.len(), sample.len());
        for (a, b) in sample.iter().zip(again.iter()) {
            assert_eq!(a.func, b.func);
            assert_eq!(a.derivation.to_string(), b.derivation.to_string());
        }
    }

    #[test]
    fn group_report_passes_on_generated_sample() {
        let sample = generate_g(2, 10, 3);
        let grid = vec![
            (
                "{[1/4,1/2]}".parse().unwrap(),
                "{(1/8,3/4)}".parse().unwrap(),
                Rat::one(),
            ),
            (
                "{[0,1/8]}".parse().unwrap(),
                "{[0,1/4)}".parse().unwrap(),
                r(1, 2),
            ),
            // precondition violation row: K outside V
            (
                "{[1/2,3/4]}".parse().unwrap(),
                "{(0,1/4)}".parse().unwrap(),
                Rat::one(),
            ),
        ];
        let report = verify_group_properties(&sample, &grid);
        assert_eq!(report.failures(), 0);
        assert!(report.rows.iter().any(|r| r.precondition_violated));
    }
}
