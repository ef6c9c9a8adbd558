//! Continuous piecewise-linear functions on `[0,1]` with rational
//! breakpoints and values.
//!
//! `PwlFn` is the concrete model for the ambient lattice-ordered group of
//! functions: closed under addition, subtraction, rational scaling, and
//! pointwise min/max (crossings are inserted exactly). The canonical form
//! keeps no three collinear consecutive points, so structural equality
//! decides function equality.

use crate::rat::Rat;
use crate::rset::{Interval, RSet};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PwlError {
    #[error("function needs at least two points")]
    TooFewPoints,
    #[error("abscissae must be strictly increasing (offender at x={0})")]
    NonIncreasing(Rat),
    #[error("first abscissa must be 0, got {0}")]
    MissingLeftEndpoint(Rat),
    #[error("last abscissa must be 1, got {0}")]
    MissingRightEndpoint(Rat),
    #[error("argument {0} outside [0,1]")]
    OutOfDomain(Rat),
    #[error("function is negative at t={0}")]
    Negative(Rat),
    #[error("malformed function literal `{0}`")]
    Parse(String),
}

/// First-segment data: `f(t) = lam + mu*t` exactly on `[0, eps]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Germ {
    pub lam: Rat,
    pub mu: Rat,
    pub eps: Rat,
}

impl Germ {
    pub fn value_at(&self, t: &Rat) -> Rat {
        &self.lam + &(&self.mu * t)
    }

    /// Zero germ: identically zero near 0.
    pub fn is_zero(&self) -> bool {
        self.lam.is_zero() && self.mu.is_zero()
    }

    /// Pointwise `self(t) < other(t)` for all small `t > 0`. For linear
    /// germs this is the lexicographic order on `(lam, mu)`.
    pub fn strictly_below(&self, other: &Germ) -> bool {
        self.lam < other.lam || (self.lam == other.lam && self.mu < other.mu)
    }

    /// Pointwise `self(t) <= other(t)` for all small `t > 0`.
    pub fn below_or_equal(&self, other: &Germ) -> bool {
        self.strictly_below(other) || (self.lam == other.lam && self.mu == other.mu)
    }

    /// Strictly positive on a punctured right-neighbourhood of 0.
    pub fn is_positive_near_zero(&self) -> bool {
        self.lam.is_positive() || (self.lam.is_zero() && self.mu.is_positive())
    }
}

/// A continuous piecewise-linear function on `[0,1]`.
#[derive(Clone, PartialEq, Eq)]
pub struct PwlFn {
    points: Vec<(Rat, Rat)>,
}

impl PwlFn {
    /// Validate and canonicalize an explicit point list.
    pub fn from_points(points: Vec<(Rat, Rat)>) -> Result<PwlFn, PwlError> {
        if points.len() < 2 {
            return Err(PwlError::TooFewPoints);
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(PwlError::NonIncreasing(w[1].0.clone()));
            }
        }
        let first = &points.first().unwrap().0;
        if !first.is_zero() {
            return Err(PwlError::MissingLeftEndpoint(first.clone()));
        }
        let last = &points.last().unwrap().0;
        if last != &Rat::one() {
            return Err(PwlError::MissingRightEndpoint(last.clone()));
        }
        Ok(PwlFn::canonical(points))
    }

    fn canonical(points: Vec<(Rat, Rat)>) -> PwlFn {
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(points.len());
        for p in points {
            while out.len() >= 2 {
                let a = &out[out.len() - 2];
                let b = &out[out.len() - 1];
                // collinear iff (yb-ya)(xp-xb) == (yp-yb)(xb-xa)
                let lhs = &(&b.1 - &a.1) * &(&p.0 - &b.0);
                let rhs = &(&p.1 - &b.1) * &(&b.0 - &a.0);
                if lhs == rhs {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        PwlFn { points: out }
    }

    pub fn constant(c: Rat) -> PwlFn {
        PwlFn { points: vec![(Rat::zero(), c.clone()), (Rat::one(), c)] }
    }

    /// The distinguished function `f0(t) = t`.
    pub fn identity() -> PwlFn {
        PwlFn { points: vec![(Rat::zero(), Rat::zero()), (Rat::one(), Rat::one())] }
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.points
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Rat> {
        self.points.iter().map(|(x, _)| x)
    }

    pub fn is_zero_fn(&self) -> bool {
        self.points.iter().all(|(_, y)| y.is_zero())
    }

    pub fn try_eval(&self, t: &Rat) -> Result<Rat, PwlError> {
        if t < &Rat::zero() || t > &Rat::one() {
            return Err(PwlError::OutOfDomain(t.clone()));
        }
        Ok(self.eval(t))
    }

    /// Exact linear interpolation. Panics outside `[0,1]`.
    pub fn eval(&self, t: &Rat) -> Rat {
        assert!(
            t >= &Rat::zero() && t <= &Rat::one(),
            "eval argument {t} outside [0,1]"
        );
        let pts = &self.points;
        let idx = match pts.binary_search_by(|(x, _)| x.cmp(t)) {
            Ok(i) => return pts[i].1.clone(),
            Err(i) => i,
        };
        let (x0, y0) = &pts[idx - 1];
        let (x1, y1) = &pts[idx];
        y0 + &(&(&(y1 - y0) * &(t - x0)) / &(x1 - x0))
    }

    /// Values of both functions at every merged breakpoint, via one
    /// linear walk over both point lists.
    fn merged_values(&self, other: &PwlFn) -> Vec<(Rat, Rat, Rat)> {
        let mut out = Vec::with_capacity(self.points.len() + other.points.len());
        let mut ca = SegCursor::new(&self.points);
        let mut cb = SegCursor::new(&other.points);
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.points.len() || j < other.points.len() {
            let take_left = match (self.points.get(i), other.points.get(j)) {
                (Some(a), Some(b)) => a.0 <= b.0,
                (Some(_), None) => true,
                _ => false,
            };
            let x = if take_left {
                i += 1;
                &self.points[i - 1].0
            } else {
                j += 1;
                &other.points[j - 1].0
            };
            if out.last().map(|(px, _, _)| px == x).unwrap_or(false) {
                continue;
            }
            let ya = ca.value_at(x);
            let yb = cb.value_at(x);
            out.push((x.clone(), ya, yb));
        }
        out
    }

    fn zip_on_grid(&self, other: &PwlFn, op: impl Fn(&Rat, &Rat) -> Rat) -> PwlFn {
        let pts = self
            .merged_values(other)
            .into_iter()
            .map(|(x, ya, yb)| {
                let y = op(&ya, &yb);
                (x, y)
            })
            .collect();
        PwlFn::canonical(pts)
    }

    pub fn add(&self, other: &PwlFn) -> PwlFn {
        self.zip_on_grid(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PwlFn) -> PwlFn {
        self.zip_on_grid(other, |a, b| a - b)
    }

    pub fn neg(&self) -> PwlFn {
        PwlFn::canonical(self.points.iter().map(|(x, y)| (x.clone(), -y.clone())).collect())
    }

    pub fn scale(&self, q: &Rat) -> PwlFn {
        PwlFn::canonical(self.points.iter().map(|(x, y)| (x.clone(), q * y)).collect())
    }

    /// Pointwise min/max with exact crossings inserted as breakpoints.
    fn lattice_op(&self, other: &PwlFn, minimize: bool) -> PwlFn {
        let vals = self.merged_values(other);
        let mut pts: Vec<(Rat, Rat)> = Vec::with_capacity(vals.len() + 2);
        let mut prev: Option<(Rat, Rat)> = None; // (x, d) with d = self - other
        for (x, ya, yb) in vals {
            let d = &ya - &yb;
            if let Some((px, pd)) = &prev {
                if pd.is_positive() && d.is_negative() || pd.is_negative() && d.is_positive() {
                    // strict sign change: single interior crossing where
                    // both functions agree
                    let span = &x - px;
                    let cross = px + &(&(&span * pd) / &(pd - &d));
                    let y = self.eval(&cross);
                    pts.push((cross, y));
                }
            }
            let y = if d.is_zero() || (minimize == d.is_negative()) {
                ya
            } else {
                yb
            };
            prev = Some((x.clone(), d));
            pts.push((x, y));
        }
        PwlFn::canonical(pts)
    }

    pub fn meet(&self, other: &PwlFn) -> PwlFn {
        self.lattice_op(other, true)
    }

    pub fn join(&self, other: &PwlFn) -> PwlFn {
        self.lattice_op(other, false)
    }

    /// `f >= 0` everywhere; for piecewise-linear functions this is a
    /// breakpoint check.
    pub fn is_nonneg(&self) -> bool {
        self.points.iter().all(|(_, y)| !y.is_negative())
    }

    /// Some breakpoint where the function is negative.
    pub fn negative_witness(&self) -> Option<Rat> {
        self.points
            .iter()
            .find(|(_, y)| y.is_negative())
            .map(|(x, _)| x.clone())
    }

    /// The exact zero set `{t : f(t) = 0}`.
    pub fn zero_set(&self) -> RSet {
        let mut ivs = Vec::new();
        for w in self.points.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            match (y0.is_zero(), y1.is_zero()) {
                (true, true) => ivs.push(Interval::closed(x0.clone(), x1.clone())),
                (true, false) => ivs.push(Interval::point(x0.clone())),
                (false, true) => ivs.push(Interval::point(x1.clone())),
                (false, false) => {
                    if y0.is_positive() != y1.is_positive() {
                        let span = x1 - x0;
                        let root = x0 + &(&(&span * y0) / &(y0 - y1));
                        ivs.push(Interval::point(root));
                    }
                }
            }
        }
        RSet::from_intervals(ivs)
    }

    /// Co-zero set `{t : f(t) > 0}` of a nonnegative function, as a
    /// relatively open `RSet`.
    pub fn cozero(&self) -> Result<RSet, PwlError> {
        if let Some(w) = self.negative_witness() {
            return Err(PwlError::Negative(w));
        }
        Ok(self.zero_set().complement())
    }

    /// Exact sublevel set `{t : f(t) <= c}`.
    pub fn level_set_le(&self, c: &Rat) -> RSet {
        self.sub(&PwlFn::constant(c.clone())).nonpos_set()
    }

    /// Exact superlevel set `{t : f(t) >= c}`.
    pub fn level_set_ge(&self, c: &Rat) -> RSet {
        PwlFn::constant(c.clone()).sub(self).nonpos_set()
    }

    /// `{t : f(t) <= 0}`, exact.
    fn nonpos_set(&self) -> RSet {
        let mut ivs = Vec::new();
        for w in self.points.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            let left_in = !y0.is_positive();
            let right_in = !y1.is_positive();
            match (left_in, right_in) {
                (true, true) => ivs.push(Interval::closed(x0.clone(), x1.clone())),
                (false, false) => {}
                _ => {
                    // one strict sign change; root is the section boundary
                    let span = x1 - x0;
                    let root = x0 + &(&(&span * y0) / &(y0 - y1));
                    if left_in {
                        ivs.push(Interval::closed(x0.clone(), root));
                    } else {
                        ivs.push(Interval::closed(root, x1.clone()));
                    }
                }
            }
        }
        RSet::from_intervals(ivs)
    }

    /// Minimum over the closure of `s` (piecewise-linear functions attain
    /// it at a clipped breakpoint). `None` when `s` is empty.
    pub fn min_over(&self, s: &RSet) -> Option<(Rat, Rat)> {
        self.extremum_over(s, true)
    }

    /// Maximum over the closure of `s`.
    pub fn max_over(&self, s: &RSet) -> Option<(Rat, Rat)> {
        self.extremum_over(s, false)
    }

    fn extremum_over(&self, s: &RSet, minimize: bool) -> Option<(Rat, Rat)> {
        let mut best: Option<(Rat, Rat)> = None;
        for iv in s.closure().intervals() {
            let mut candidates = vec![iv.lo.clone(), iv.hi.clone()];
            for (x, _) in &self.points {
                if x > &iv.lo && x < &iv.hi {
                    candidates.push(x.clone());
                }
            }
            for t in candidates {
                let y = self.eval(&t);
                let better = match &best {
                    None => true,
                    Some((_, by)) => {
                        if minimize {
                            y < *by
                        } else {
                            y > *by
                        }
                    }
                };
                if better {
                    best = Some((t, y));
                }
            }
        }
        best
    }

    pub fn max_value(&self) -> Rat {
        self.points
            .iter()
            .map(|(_, y)| y.clone())
            .max()
            .expect("non-empty point list")
    }

    /// First-segment local form at 0.
    pub fn germ(&self) -> Germ {
        let (x0, y0) = &self.points[0];
        let (x1, y1) = &self.points[1];
        debug_assert!(x0.is_zero());
        let mu = &(y1 - y0) / &(x1 - x0);
        Germ { lam: y0.clone(), mu, eps: x1.clone() }
    }
}

/// Segment cursor for linear walks over a point list with increasing
/// query abscissae.
struct SegCursor<'a> {
    pts: &'a [(Rat, Rat)],
    seg: usize,
}

impl<'a> SegCursor<'a> {
    fn new(pts: &'a [(Rat, Rat)]) -> SegCursor<'a> {
        SegCursor { pts, seg: 0 }
    }

    fn value_at(&mut self, x: &Rat) -> Rat {
        while self.seg + 2 < self.pts.len() && &self.pts[self.seg + 1].0 <= x {
            self.seg += 1;
        }
        let (x0, y0) = &self.pts[self.seg];
        if x == x0 {
            return y0.clone();
        }
        let (x1, y1) = &self.pts[self.seg + 1];
        if x == x1 {
            return y1.clone();
        }
        y0 + &(&(&(y1 - y0) * &(x - x0)) / &(x1 - x0))
    }
}

/// Exact relation of two functions over a set.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    /// `f <= g` on all of `s`.
    pub leq: bool,
    /// A point of `s` with `f > g`, when `leq` fails.
    pub leq_witness: Option<Rat>,
    /// `f(t) < g(t)` for every `t` in `s` (the pointwise-strict reading).
    pub strict: bool,
    /// A point of `s` with `f = g` or `f > g`, when `strict` fails.
    pub strict_witness: Option<Rat>,
    /// `inf (g - f)` over the closure of `s`; None when `s` is empty.
    pub inf_gap: Option<Rat>,
}

/// Compare `f` and `g` exactly over `s`: the `<=` verdict, the
/// pointwise-strict verdict, and the infimum of `g - f` over the closure
/// of `s`. Continuity makes the closure infimum equal the infimum over `s`
/// itself, and it is attained at a breakpoint or clipped endpoint.
pub fn compare(f: &PwlFn, g: &PwlFn, s: &RSet) -> CompareReport {
    if s.is_empty() {
        return CompareReport {
            leq: true,
            leq_witness: None,
            strict: true,
            strict_witness: None,
            inf_gap: None,
        };
    }
    let d = g.sub(f);
    let (arg_min, min) = d.min_over(s).expect("non-empty set");
    let leq = !min.is_negative();
    let leq_witness = if leq {
        None
    } else if s.contains(&arg_min) {
        Some(arg_min.clone())
    } else {
        // minimum attained on closure only: slide inward to a point of s
        find_negative_point_inside(&d, s)
    };
    let eq_inside = d.zero_set().intersect(s);
    let strict = leq && eq_inside.is_empty();
    let strict_witness = if strict {
        None
    } else if !leq {
        leq_witness.clone()
    } else {
        eq_inside.sample_point()
    };
    CompareReport { leq, leq_witness, strict, strict_witness, inf_gap: Some(min) }
}

fn find_negative_point_inside(d: &PwlFn, s: &RSet) -> Option<Rat> {
    // {d < 0} is relatively open, and a negative closure-infimum forces it
    // to meet s; any sample point of the intersection is a witness.
    let strictly_neg = d.level_set_ge(&Rat::zero()).complement();
    strictly_neg.intersect(s).sample_point()
}

impl fmt::Display for PwlFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pwl[")?;
        for (i, (x, y)) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PwlFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PwlFn {
    type Err = PwlError;

    /// Parse the `pwl[(0,0);(1/4,1/16);(1,1/16)]` literal form.
    fn from_str(s: &str) -> Result<PwlFn, PwlError> {
        let bad = || PwlError::Parse(s.to_string());
        let body = s
            .trim()
            .strip_prefix("pwl[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let mut pts = Vec::new();
        for part in body.split(';') {
            let inner = part
                .trim()
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(bad)?;
            let (x, y) = inner.split_once(',').ok_or_else(bad)?;
            let x: Rat = x.trim().parse().map_err(|_| bad())?;
            let y: Rat = y.trim().parse().map_err(|_| bad())?;
            pts.push((x, y));
        }
        PwlFn::from_points(pts)
    }
}

impl Serialize for PwlFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PwlFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<PwlFn, D::Error> {
        let s = String::deserialize(deserializer)?;
        PwlFn::from_str(&s).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn pwl(s: &str) -> PwlFn {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let f0 = PwlFn::identity();
        assert_eq!(f0.eval(&r(1, 2)), r(1, 2));
        assert_eq!(PwlFn::constant(Rat::one()).eval(&r(3, 7)), Rat::one());
        // hand interpolation on the first segment of a two-segment function
        let f = pwl("pwl[(0,0);(1/4,1/16);(1,1/16)]");
        assert_eq!(f.eval(&r(1, 8)), r(1, 32));
        assert!(f.try_eval(&r(3, 2)).is_err());
    }

    #[test]
    fn group_op_examples() {
        let f0 = PwlFn::identity();
        let one = PwlFn::constant(Rat::one());
        assert_eq!(f0.add(&one.sub(&f0)), one);
        assert_eq!(f0.scale(&Rat::zero()), PwlFn::constant(Rat::zero()));
        assert_eq!(f0.scale(&Rat::int(2)).sub(&f0), f0);
    }

    #[test]
    fn lattice_op_examples() {
        let f0 = PwlFn::identity();
        let one = PwlFn::constant(Rat::one());
        let hat = f0.meet(&one.sub(&f0));
        assert_eq!(hat, pwl("pwl[(0,0);(1/2,1/2);(1,0)]"));
        assert_eq!(f0.join(&f0), f0);
        let capped = f0.meet(&PwlFn::constant(r(1, 4)));
        assert_eq!(capped, pwl("pwl[(0,0);(1/4,1/4);(1,1/4)]"));
    }

    #[test]
    fn canonical_form_merges_collinear() {
        let f = PwlFn::from_points(vec![
            (Rat::zero(), Rat::zero()),
            (r(1, 2), r(1, 2)),
            (Rat::one(), Rat::one()),
        ])
        .unwrap();
        assert_eq!(f, PwlFn::identity());
        assert_eq!(f.points().len(), 2);
    }

    #[test]
    fn invalid_point_lists() {
        assert!(matches!(
            PwlFn::from_points(vec![(Rat::zero(), Rat::zero()), (Rat::zero(), Rat::one())]),
            Err(PwlError::NonIncreasing(_))
        ));
        assert!(matches!(
            PwlFn::from_points(vec![(r(1, 4), Rat::zero()), (Rat::one(), Rat::one())]),
            Err(PwlError::MissingLeftEndpoint(_))
        ));
        assert!(matches!(
            PwlFn::from_points(vec![(Rat::zero(), Rat::zero()), (r(1, 2), Rat::one())]),
            Err(PwlError::MissingRightEndpoint(_))
        ));
    }

    #[test]
    fn cozero_examples() {
        let f0 = PwlFn::identity();
        assert_eq!(f0.cozero().unwrap().to_string(), "{(0,1]}");
        assert_eq!(PwlFn::constant(Rat::zero()).cozero().unwrap(), RSet::empty());
        // hat vanishing on [1/2,1]: meet(f0, max(0, 1/2 - f0))
        let zero = PwlFn::constant(Rat::zero());
        let half_minus = PwlFn::constant(r(1, 2)).sub(&f0);
        let hat = f0.meet(&zero.join(&half_minus));
        assert_eq!(hat.cozero().unwrap().to_string(), "{(0,1/2)}");
        assert!(f0.neg().cozero().is_err());
    }

    #[test]
    fn compare_examples() {
        let f0 = PwlFn::identity();
        let s: RSet = "{(0,1]}".parse().unwrap();
        let rep = compare(&f0, &f0.scale(&Rat::int(2)), &s);
        assert!(rep.leq);
        assert!(rep.strict);
        assert_eq!(rep.inf_gap, Some(Rat::zero()));

        let rep = compare(&f0, &f0, &s);
        assert!(rep.leq);
        assert!(!rep.strict);
        assert!(rep.strict_witness.is_some());

        let rep = compare(&PwlFn::constant(Rat::one()), &f0, &s);
        assert!(!rep.leq);
        let w = rep.leq_witness.expect("witness point");
        assert!(s.contains(&w));
        assert!(PwlFn::constant(Rat::one()).eval(&w) > f0.eval(&w));
    }

    #[test]
    fn cozero_matches_sampling() {
        // cozero agrees with pointwise positivity at breakpoints and
        // segment midpoints
        for s in [
            "pwl[(0,0);(1/4,1/16);(1,1/16)]",
            "pwl[(0,0);(1/4,1/4);(1/2,0);(1,0)]",
            "pwl[(0,1);(1/3,0);(2/3,0);(1,2)]",
        ] {
            let f = pwl(s);
            let u = f.cozero().unwrap();
            let mut probes: Vec<Rat> = f.breakpoints().cloned().collect();
            for w in f.points().windows(2) {
                probes.push(Rat::midpoint(&w[0].0, &w[1].0));
            }
            for t in probes {
                assert_eq!(u.contains(&t), f.eval(&t).is_positive(), "at {t} in {s}");
            }
        }
    }

    #[test]
    fn germ_reads_first_segment() {
        let f = pwl("pwl[(0,1/2);(1/4,1/2);(1,0)]");
        let g = f.germ();
        assert_eq!((g.lam, g.mu, g.eps), (r(1, 2), Rat::zero(), r(1, 4)));
        let g0 = PwlFn::identity().germ();
        assert_eq!((g0.lam, g0.mu, g0.eps), (Rat::zero(), Rat::one(), Rat::one()));
    }

    #[test]
    fn level_sets_exact() {
        let f0 = PwlFn::identity();
        assert_eq!(f0.level_set_le(&r(1, 4)).to_string(), "{[0,1/4]}");
        assert_eq!(f0.level_set_ge(&r(3, 4)).to_string(), "{[3/4,1]}");
        let hat = f0.meet(&PwlFn::constant(Rat::one()).sub(&f0));
        assert_eq!(hat.level_set_ge(&r(1, 4)).to_string(), "{[1/4,3/4]}");
    }

    #[test]
    fn parse_print_round_trip() {
        for s in [
            "pwl[(0,0);(1,1)]",
            "pwl[(0,0);(1/2,1/2);(1,0)]",
            "pwl[(0,-1);(1/3,2/3);(1,1/16)]",
        ] {
            let f = pwl(s);
            assert_eq!(f.to_string(), s);
            assert_eq!(format!("{}", pwl(&f.to_string())), s);
        }
        assert!("pwl[(0,0);(0,1)]".parse::<PwlFn>().is_err());
        assert!("pwl[(0,0)]".parse::<PwlFn>().is_err());
        assert!("pwl[(0,0);(1,x)]".parse::<PwlFn>().is_err());
    }
}
