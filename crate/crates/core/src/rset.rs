//! Finite unions of rational subintervals of `[0,1]` with open/closed
//! endpoint tags.
//!
//! These sets play the role of the closed sets `K`, open sets `V`, `U`,
//! co-zero sets and punctured neighbourhoods used throughout the crate.
//! Openness and closedness are always meant relative to `[0,1]`, so for
//! example `(0,1]` and `[0,1/2)` both count as open.

use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// One interval of an `RSet`. Degenerate (`lo == hi`) intervals must be
/// closed on both ends; empty intervals are never stored.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: Rat, hi: Rat) -> Interval {
        Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: Rat, hi: Rat) -> Interval {
        Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn point(t: Rat) -> Interval {
        Interval { lo: t.clone(), hi: t, lo_closed: true, hi_closed: true }
    }

    pub fn new(lo: Rat, hi: Rat, lo_closed: bool, hi_closed: bool) -> Interval {
        Interval { lo, hi, lo_closed, hi_closed }
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, t: &Rat) -> bool {
        let lo_ok = t > &self.lo || (t == &self.lo && self.lo_closed);
        let hi_ok = t < &self.hi || (t == &self.hi && self.hi_closed);
        lo_ok && hi_ok
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// True when the union of `self` and `next` is connected, assuming
    /// `self.lo <= next.lo`.
    fn touches(&self, next: &Interval) -> bool {
        if next.lo < self.hi {
            return true;
        }
        if next.lo == self.hi {
            return self.hi_closed || next.lo_closed;
        }
        false
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A normalized finite union of subintervals of `[0,1]`: sorted, pairwise
/// disjoint and non-adjacent.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RSet {
    ivs: Vec<Interval>,
}

impl RSet {
    pub fn empty() -> RSet {
        RSet { ivs: Vec::new() }
    }

    pub fn full() -> RSet {
        RSet::from_intervals(vec![Interval::closed(Rat::zero(), Rat::one())])
    }

    pub fn interval(iv: Interval) -> RSet {
        RSet::from_intervals(vec![iv])
    }

    pub fn point(t: Rat) -> RSet {
        RSet::interval(Interval::point(t))
    }

    /// Build from arbitrary intervals; drops empty ones, sorts, merges.
    /// Panics if any endpoint leaves `[0,1]`.
    pub fn from_intervals(ivs: Vec<Interval>) -> RSet {
        let mut ivs: Vec<Interval> = ivs.into_iter().filter(|iv| !iv.is_empty()).collect();
        for iv in &ivs {
            assert!(
                iv.lo >= Rat::zero() && iv.hi <= Rat::one(),
                "interval endpoint outside [0,1]: {iv}"
            );
        }
        ivs.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match out.last_mut() {
                Some(last) if last.touches(&iv) => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                        last.hi_closed = iv.hi_closed;
                    } else if iv.hi == last.hi {
                        last.hi_closed = last.hi_closed || iv.hi_closed;
                    }
                }
                _ => out.push(iv),
            }
        }
        RSet { ivs: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.ivs
    }

    pub fn is_empty(&self) -> bool {
        self.ivs.is_empty()
    }

    pub fn contains(&self, t: &Rat) -> bool {
        self.ivs.iter().any(|iv| iv.contains(t))
    }

    pub fn min(&self) -> Option<&Rat> {
        self.ivs.first().map(|iv| &iv.lo)
    }

    pub fn max(&self) -> Option<&Rat> {
        self.ivs.last().map(|iv| &iv.hi)
    }

    pub fn union(&self, other: &RSet) -> RSet {
        let mut ivs = self.ivs.clone();
        ivs.extend(other.ivs.iter().cloned());
        RSet::from_intervals(ivs)
    }

    pub fn intersect(&self, other: &RSet) -> RSet {
        let mut out = Vec::new();
        for a in &self.ivs {
            for b in &other.ivs {
                if a.hi < b.lo || b.hi < a.lo {
                    continue;
                }
                let (lo, lo_closed) = match a.lo.cmp(&b.lo) {
                    std::cmp::Ordering::Less => (b.lo.clone(), b.lo_closed),
                    std::cmp::Ordering::Greater => (a.lo.clone(), a.lo_closed),
                    std::cmp::Ordering::Equal => (a.lo.clone(), a.lo_closed && b.lo_closed),
                };
                let (hi, hi_closed) = match a.hi.cmp(&b.hi) {
                    std::cmp::Ordering::Less => (a.hi.clone(), a.hi_closed),
                    std::cmp::Ordering::Greater => (b.hi.clone(), b.hi_closed),
                    std::cmp::Ordering::Equal => (a.hi.clone(), a.hi_closed && b.hi_closed),
                };
                out.push(Interval::new(lo, hi, lo_closed, hi_closed));
            }
        }
        RSet::from_intervals(out)
    }

    /// Complement relative to `[0,1]`.
    pub fn complement(&self) -> RSet {
        let mut out = Vec::new();
        let mut cursor = Rat::zero();
        let mut cursor_closed = true; // cursor itself still available
        for iv in &self.ivs {
            let gap = Interval::new(cursor.clone(), iv.lo.clone(), cursor_closed, !iv.lo_closed);
            if !gap.is_empty() {
                out.push(gap);
            }
            cursor = iv.hi.clone();
            cursor_closed = !iv.hi_closed;
        }
        let tail = Interval::new(cursor, Rat::one(), cursor_closed, true);
        if !tail.is_empty() {
            out.push(tail);
        }
        RSet { ivs: out }
    }

    pub fn is_subset_of(&self, other: &RSet) -> bool {
        self.intersect(&other.complement()).is_empty()
    }

    pub fn closure(&self) -> RSet {
        RSet::from_intervals(
            self.ivs
                .iter()
                .map(|iv| Interval::closed(iv.lo.clone(), iv.hi.clone()))
                .collect(),
        )
    }

    /// Interior relative to `[0,1]`.
    pub fn interior(&self) -> RSet {
        self.complement().closure().complement()
    }

    pub fn is_relatively_open(&self) -> bool {
        self == &self.interior()
    }

    pub fn is_relatively_closed(&self) -> bool {
        self == &self.closure()
    }

    /// Topological boundary relative to `[0,1]`.
    pub fn boundary(&self) -> Vec<Rat> {
        let cl = self.closure();
        let int = self.interior();
        let mut pts = Vec::new();
        for iv in cl.intervals() {
            for p in [&iv.lo, &iv.hi] {
                if !int.contains(p) && !pts.contains(p) {
                    pts.push(p.clone());
                }
            }
        }
        pts.sort();
        pts
    }

    /// A point of `self`, preferring interval midpoints so that witnesses
    /// stay away from endpoint tags.
    pub fn sample_point(&self) -> Option<Rat> {
        let iv = self.ivs.first()?;
        if iv.is_degenerate() {
            Some(iv.lo.clone())
        } else {
            Some(Rat::midpoint(&iv.lo, &iv.hi))
        }
    }
}

impl fmt::Display for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, iv) in self.ivs.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{iv}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse error for the `{[a,b];(c,d)}` literal form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed interval set literal `{0}`")]
pub struct ParseRSetError(pub String);

impl FromStr for RSet {
    type Err = ParseRSetError;

    fn from_str(s: &str) -> Result<RSet, ParseRSetError> {
        let bad = || ParseRSetError(s.to_string());
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(bad)?
            .trim();
        if body.is_empty() {
            return Ok(RSet::empty());
        }
        let mut ivs = Vec::new();
        for part in body.split(';') {
            let part = part.trim();
            let mut chars = part.chars();
            let open_ch = chars.next().ok_or_else(bad)?;
            let close_ch = part.chars().last().ok_or_else(bad)?;
            let lo_closed = match open_ch {
                '[' => true,
                '(' => false,
                _ => return Err(bad()),
            };
            let hi_closed = match close_ch {
                ']' => true,
                ')' => false,
                _ => return Err(bad()),
            };
            let inner = &part[1..part.len() - 1];
            let (lo, hi) = inner.split_once(',').ok_or_else(bad)?;
            let lo: Rat = lo.trim().parse().map_err(|_| bad())?;
            let hi: Rat = hi.trim().parse().map_err(|_| bad())?;
            if lo < Rat::zero() || hi > Rat::one() {
                return Err(bad());
            }
            ivs.push(Interval::new(lo, hi, lo_closed, hi_closed));
        }
        Ok(RSet::from_intervals(ivs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn normalization_merges_touching() {
        let s = RSet::from_intervals(vec![
            Interval::closed(r(0, 1), r(1, 4)),
            Interval::new(r(1, 4), r(1, 2), false, true),
        ]);
        assert_eq!(s.intervals().len(), 1);
        assert_eq!(s.to_string(), "{[0,1/2]}");

        // open endpoints meeting at a missing point stay split
        let s = RSet::from_intervals(vec![
            Interval::open(r(0, 1), r(1, 4)),
            Interval::open(r(1, 4), r(1, 2)),
        ]);
        assert_eq!(s.intervals().len(), 2);
    }

    #[test]
    fn complement_of_cozero_like_set() {
        // (0,1] relative-complement is the single point {0}
        let s = RSet::interval(Interval::new(r(0, 1), r(1, 1), false, true));
        let c = s.complement();
        assert_eq!(c.to_string(), "{[0,0]}");
        assert!(s.is_relatively_open());
        assert!(!s.is_relatively_closed());
        assert_eq!(s.union(&c), RSet::full());
    }

    #[test]
    fn interior_respects_relative_topology() {
        // [0, 1/2) is relatively open in [0,1]
        let s = RSet::interval(Interval::new(r(0, 1), r(1, 2), true, false));
        assert!(s.is_relatively_open());
        // [1/4, 1/2] has interior (1/4, 1/2)
        let t = RSet::interval(Interval::closed(r(1, 4), r(1, 2)));
        assert_eq!(t.interior().to_string(), "{(1/4,1/2)}");
        assert_eq!(t.boundary(), vec![r(1, 4), r(1, 2)]);
    }

    #[test]
    fn subset_and_intersection() {
        let k = RSet::interval(Interval::closed(r(1, 4), r(1, 2)));
        let v = RSet::interval(Interval::open(r(1, 8), r(3, 4)));
        assert!(k.is_subset_of(&v));
        assert!(!v.is_subset_of(&k));
        assert_eq!(k.intersect(&v), k);
        let w = RSet::interval(Interval::open(r(1, 2), r(3, 4)));
        assert_eq!(k.intersect(&w), RSet::empty());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["{}", "{[0,1/4]}", "{(1/8,3/4)}", "{[0,1/4];(1/2,3/4)}", "{[1/3,1/3]}"] {
            let set: RSet = s.parse().unwrap();
            assert_eq!(set.to_string(), s);
        }
        assert!("[0,1]".parse::<RSet>().is_err());
        assert!("{[0,2]}".parse::<RSet>().is_err());
    }
}
