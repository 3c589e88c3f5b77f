use super::error::HilbertError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    fn contains_within(&self, x: f64, tol: f64) -> bool {
        let above = if self.lo_closed {
            x >= self.lo - tol
        } else {
            x > self.lo + tol
        };
        let below = if self.hi_closed {
            x <= self.hi + tol
        } else {
            x < self.hi - tol
        };
        above && below
    }
}

/// A finite union of real intervals, kept sorted and disjoint.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BorelSet {
    intervals: Vec<Interval>,
}

impl BorelSet {
    pub fn empty() -> Self {
        BorelSet::default()
    }

    pub fn reals() -> Self {
        Self::from_intervals(vec![Interval {
            lo: f64::NEG_INFINITY,
            lo_closed: false,
            hi: f64::INFINITY,
            hi_closed: false,
        }])
    }

    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    pub fn points(xs: &[f64]) -> Self {
        Self::from_intervals(
            xs.iter()
                .map(|&x| Interval {
                    lo: x,
                    lo_closed: true,
                    hi: x,
                    hi_closed: true,
                })
                .collect(),
        )
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::interval(lo, true, hi, true)
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::interval(lo, false, hi, false)
    }

    pub fn interval(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Self {
        Self::from_intervals(vec![Interval {
            lo,
            lo_closed: lo_closed && lo.is_finite(),
            hi,
            hi_closed: hi_closed && hi.is_finite(),
        }])
    }

    pub fn union(&self, other: &BorelSet) -> BorelSet {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::from_intervals(all)
    }

    fn from_intervals(mut intervals: Vec<Interval>) -> Self {
        intervals.retain(|i| !i.is_empty() && !i.lo.is_nan() && !i.hi.is_nan());
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::new();
        for iv in intervals {
            if let Some(last) = merged.last_mut() {
                let touches =
                    iv.lo < last.hi || (iv.lo == last.hi && (iv.lo_closed || last.hi_closed));
                if touches {
                    if iv.hi > last.hi || (iv.hi == last.hi && iv.hi_closed) {
                        last.hi = iv.hi;
                        last.hi_closed = iv.hi_closed || (iv.hi == last.hi && last.hi_closed);
                    }
                    continue;
                }
            }
            merged.push(iv);
        }
        BorelSet { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.contains_within(x, 0.0)
    }

    /// Membership with closed endpoints widened and open endpoints
    /// narrowed by `tol`.
    pub fn contains_within(&self, x: f64, tol: f64) -> bool {
        self.intervals.iter().any(|i| i.contains_within(x, tol))
    }
}

fn fmt_bound(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

/// `{}` for the empty set, `R` for the reals, `{x}` for points, interval
/// notation otherwise, joined by ` u `.
impl fmt::Display for BorelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|i| {
                if i.lo == i.hi {
                    format!("{{{}}}", fmt_bound(i.lo))
                } else if i.lo == f64::NEG_INFINITY && i.hi == f64::INFINITY {
                    "R".into()
                } else {
                    format!(
                        "{}{}, {}{}",
                        if i.lo_closed { '[' } else { '(' },
                        fmt_bound(i.lo),
                        fmt_bound(i.hi),
                        if i.hi_closed { ']' } else { ')' }
                    )
                }
            })
            .collect();
        f.write_str(&parts.join(" u "))
    }
}

impl FromStr for BorelSet {
    type Err = HilbertError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |message: &str| HilbertError::InvalidBorelSet {
            text: text.to_string(),
            message: message.to_string(),
        };
        let number = |s: &str| -> Result<f64, HilbertError> {
            match s.trim() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => other
                    .parse::<f64>()
                    .ok()
                    .filter(|x| !x.is_nan())
                    .ok_or_else(|| bad(&format!("bad number `{other}`"))),
            }
        };
        let mut set = BorelSet::empty();
        for term in text.split(['u', 'U', '∪']) {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let piece = match term {
                "R" | "reals" => BorelSet::reals(),
                "{}" | "empty" => BorelSet::empty(),
                t if t.starts_with('{') && t.ends_with('}') => {
                    let xs = t[1..t.len() - 1]
                        .split(',')
                        .map(number)
                        .collect::<Result<Vec<_>, _>>()?;
                    BorelSet::points(&xs)
                }
                t if (t.starts_with('[') || t.starts_with('('))
                    && (t.ends_with(']') || t.ends_with(')')) =>
                {
                    let body = &t[1..t.len() - 1];
                    let (lo, hi) = body
                        .split_once(',')
                        .ok_or_else(|| bad("interval needs two bounds"))?;
                    BorelSet::interval(
                        number(lo)?,
                        t.starts_with('['),
                        number(hi)?,
                        t.ends_with(']'),
                    )
                }
                _ => return Err(bad(&format!("unrecognised term `{term}`"))),
            };
            set = set.union(&piece);
        }
        Ok(set)
    }
}

impl Serialize for BorelSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BorelSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
