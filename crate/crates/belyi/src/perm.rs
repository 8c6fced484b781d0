//! Permutations on {1..n}, stored 0-indexed internally.

use crate::error::{Error, Result};

/// A permutation of {1..n}. External formats are 1-indexed; the internal
/// image table is 0-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Build from a 0-indexed image table; checks bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::Parse(format!("point {} out of range 1..{n}", x + 1)));
            }
            if seen[x] {
                return Err(Error::Parse(format!("point {} repeated in image", x + 1)));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from disjoint cycles given in 1-indexed points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cyc in cycles {
            for w in cyc.windows(2) {
                let (p, q) = (w[0], w[1]);
                Self::check_point(p, n)?;
                Self::check_point(q, n)?;
                images[p - 1] = q - 1;
            }
            if let (Some(&first), Some(&last)) = (cyc.first(), cyc.last()) {
                Self::check_point(first, n)?;
                Self::check_point(last, n)?;
                if cyc.len() > 1 {
                    images[last - 1] = first - 1;
                }
            }
            for &p in cyc {
                if used[p - 1] {
                    return Err(Error::Parse(format!("point {p} appears in two cycles")));
                }
                used[p - 1] = true;
            }
        }
        Self::from_images(images)
    }

    /// Parse disjoint-cycle notation such as `(1 2 3)(4 5)`; `()` is the identity.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse(format!("expected '(' in cycles: {rest:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let inner = &rest[1..close];
            let cyc: Vec<usize> = inner
                .split(|c: char| c == ' ' || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point {s:?}")))
                })
                .collect::<Result<_>>()?;
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = rest[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    fn check_point(p: usize, n: usize) -> Result<()> {
        if p == 0 || p > n {
            Err(Error::Parse(format!("point {p} out of range 1..{n}")))
        } else {
            Ok(())
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-indexed point.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self.then(other)`: apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// Conjugate by the relabeling `map`: returns the permutation sending
    /// map(x) to map(self(x)).
    pub fn relabel(&self, map: &[usize]) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[map[i]] = map[x];
        }
        Permutation { images }
    }

    /// Cycles as 0-indexed point lists, each starting at its least point,
    /// ordered by least point. Includes fixed points.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.images[s];
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths sorted in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Disjoint-cycle notation, 1-indexed, fixed points omitted; identity is `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let pts: Vec<String> = c.iter().map(|&p| (p + 1).to_string()).collect();
                format!("({})", pts.join(" "))
            })
            .collect()
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_roundtrip() {
        let p = Permutation::parse(6, "(1 2 3)(4 5 6)").unwrap();
        assert_eq!(p.cycle_type(), vec![3, 3]);
        assert_eq!(p.to_cycle_string(), "(1 2 3)(4 5 6)");
        let id = Permutation::parse(3, "()").unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn parse_errors() {
        assert!(Permutation::parse(3, "(1 2 2)").is_err());
        assert!(Permutation::parse(3, "(1 4)").is_err());
        assert!(Permutation::parse(3, "(1 2)(2 3)").is_err());
        assert!(Permutation::parse(3, "(1 2").is_err());
        assert!(Permutation::parse(3, "(0 1)").is_err());
    }

    #[test]
    fn compose_convention() {
        // (ab) means apply a then b.
        let a = Permutation::parse(3, "(1 2)").unwrap();
        let b = Permutation::parse(3, "(2 3)").unwrap();
        let ab = a.then(&b);
        // 1 -a-> 2 -b-> 3
        assert_eq!(ab.apply(0), 2);
        assert_eq!(ab.cycle_type(), vec![3]);
    }

    #[test]
    fn inverse_and_relabel() {
        let p = Permutation::parse(4, "(1 2 3 4)").unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        // relabel by the identity is a no-op
        let map: Vec<usize> = (0..4).collect();
        assert_eq!(p.relabel(&map), p);
        // conjugation preserves cycle type
        let map = vec![2, 0, 3, 1];
        assert_eq!(p.relabel(&map).cycle_type(), p.cycle_type());
    }
}
