//! Dessins d'enfants as permutation pairs, their passports and basic
//! combinatorial invariants.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A dessin d'enfant on `n` edges: `a` rotates edges counter-clockwise around
/// black vertices, `b` around white vertices. The pair must generate a
/// transitive group (the dessin is connected).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dessin {
    n: usize,
    a: Permutation,
    b: Permutation,
    /// Optional orbit label carried from a fixture file.
    pub label: Option<String>,
}

/// Passport: partitions of n by black-vertex degrees, white-vertex degrees
/// and face degrees. Each partition is stored in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Passport {
    pub lambda0: Vec<usize>,
    pub lambda1: Vec<usize>,
    pub lambda2: Vec<usize>,
}

impl Dessin {
    pub fn new(a: Permutation, b: Permutation) -> Result<Self> {
        Self::with_label(a, b, None)
    }

    pub fn with_label(a: Permutation, b: Permutation, label: Option<String>) -> Result<Self> {
        if a.degree() != b.degree() {
            return Err(Error::InvalidDessin(format!(
                "degree mismatch: a on {} points, b on {}",
                a.degree(),
                b.degree()
            )));
        }
        let d = Dessin {
            n: a.degree(),
            a,
            b,
            label,
        };
        if !d.is_transitive() {
            return Err(Error::InvalidDessin(
                "pair <a,b> is not transitive (dessin disconnected)".into(),
            ));
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Permutation {
        &self.a
    }

    pub fn b(&self) -> &Permutation {
        &self.b
    }

    /// The face permutation ab (apply a, then b).
    pub fn ab(&self) -> Permutation {
        self.a.then(&self.b)
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in [self.a.apply(x), self.b.apply(x), self.a.inverse().apply(x), self.b.inverse().apply(x)] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    /// Parse the line-based dessin text format:
    /// `n=<int>`, `a=<cycles>`, `b=<cycles>`, optional `orbit=<label>`,
    /// `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut a_src: Option<String> = None;
        let mut b_src: Option<String> = None;
        let mut label: Option<String> = None;
        // also accept `n=..; a=..; b=..` on one line
        for raw in text.lines().flat_map(|l| l.split(';')) {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {line:?}")))?;
            match key.trim() {
                "n" => {
                    n = Some(
                        val.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad n: {val:?}")))?,
                    )
                }
                "a" => a_src = Some(val.trim().to_string()),
                "b" => b_src = Some(val.trim().to_string()),
                "orbit" => label = Some(val.trim().to_string()),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n=".into()))?;
        if n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        let a = Permutation::parse(n, &a_src.ok_or_else(|| Error::Parse("missing a=".into()))?)?;
        let b = Permutation::parse(n, &b_src.ok_or_else(|| Error::Parse("missing b=".into()))?)?;
        Dessin::with_label(a, b, label)
    }

    /// Serialize in the same line-based format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(l) = &self.label {
            s.push_str(&format!("orbit={l}\n"));
        }
        s.push_str(&format!("n={}\na={}\nb={}\n", self.n, self.a, self.b));
        s
    }

    /// Relabel so that edge 1 lies in a face cycle of maximal length. The
    /// series expansion around the cusp at infinity needs the distinguished
    /// face to have the maximal degree n - r.
    pub fn rebased_at_max_face(&self) -> Dessin {
        let sigma_t = self.b.then(&self.a);
        let cycles = sigma_t.cycles();
        // cycles are ordered by their least point, so the first maximal one
        // gives a deterministic choice
        let mut best = &cycles[0];
        for c in &cycles {
            if c.len() > best.len() {
                best = c;
            }
        }
        let e0 = *best.iter().min().unwrap();
        if e0 == 0 {
            return self.clone();
        }
        let mut map: Vec<usize> = (0..self.n).collect();
        map.swap(0, e0);
        Dessin {
            n: self.n,
            a: self.a.relabel(&map),
            b: self.b.relabel(&map),
            label: self.label.clone(),
        }
    }

    pub fn passport(&self) -> Passport {
        Passport {
            lambda0: self.a.cycle_type(),
            lambda1: self.b.cycle_type(),
            lambda2: self.ab().cycle_type(),
        }
    }

    /// Genus from the Euler characteristic:
    /// c(a) + c(b) + c(ab) - n = 2 - 2g.
    pub fn genus(&self) -> Result<usize> {
        let c = self.a.cycle_count() as i64 + self.b.cycle_count() as i64
            + self.ab().cycle_count() as i64;
        let two_minus_2g = c - self.n as i64;
        if two_minus_2g > 2 || (2 - two_minus_2g) % 2 != 0 {
            return Err(Error::InvalidDessin(format!(
                "inconsistent Euler characteristic: 2-2g = {two_minus_2g}"
            )));
        }
        Ok(((2 - two_minus_2g) / 2) as usize)
    }

    /// True iff every a-cycle has length 1 or 3 and every b-cycle length 1 or 2.
    pub fn is_23_type(&self) -> bool {
        self.a.cycle_type().iter().all(|&l| l == 1 || l == 3)
            && self.b.cycle_type().iter().all(|&l| l == 1 || l == 2)
    }

    /// True iff genus 0 and at most one face of degree > 1.
    pub fn is_weighted_tree(&self) -> bool {
        match self.genus() {
            Ok(0) => self.ab().cycle_type().iter().filter(|&&l| l > 1).count() <= 1,
            _ => false,
        }
    }
}

impl Passport {
    pub fn new(mut lambda0: Vec<usize>, mut lambda1: Vec<usize>, mut lambda2: Vec<usize>) -> Result<Self> {
        lambda0.sort_unstable_by(|a, b| b.cmp(a));
        lambda1.sort_unstable_by(|a, b| b.cmp(a));
        lambda2.sort_unstable_by(|a, b| b.cmp(a));
        let p = Passport {
            lambda0,
            lambda1,
            lambda2,
        };
        let n = p.n();
        if n == 0 {
            return Err(Error::Parse("empty passport".into()));
        }
        for (lam, name) in [(&p.lambda1, "lambda1"), (&p.lambda2, "lambda2")] {
            if lam.iter().sum::<usize>() != n {
                return Err(Error::Parse(format!("{name} does not sum to n={n}")));
            }
            if lam.iter().any(|&x| x == 0) {
                return Err(Error::Parse(format!("{name} has a zero part")));
            }
        }
        if p.lambda0.iter().any(|&x| x == 0) {
            return Err(Error::Parse("lambda0 has a zero part".into()));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.lambda0.iter().sum()
    }

    fn count(lam: &[usize], part: usize) -> usize {
        lam.iter().filter(|&&x| x == part).count()
    }

    /// Multiplicity of degree-3 black vertices.
    pub fn p3(&self) -> usize {
        Self::count(&self.lambda0, 3)
    }

    /// Multiplicity of degree-1 black vertices.
    pub fn p1(&self) -> usize {
        Self::count(&self.lambda0, 1)
    }

    /// Multiplicity of degree-2 white vertices.
    pub fn q2(&self) -> usize {
        Self::count(&self.lambda1, 2)
    }

    /// Multiplicity of degree-1 white vertices.
    pub fn q1(&self) -> usize {
        Self::count(&self.lambda1, 1)
    }

    /// Number of degree-1 faces once the single large face is sent to infinity.
    /// For the weighted-tree shape lambda2 = ((n-r)^1, 1^r) this is r; for the
    /// all-ones case (n = 1) it is n - 1 = 0 with the width-1 face at infinity.
    pub fn r(&self) -> usize {
        self.lambda2.len() - 1
    }

    /// Width of the cusp at infinity: the largest face degree n - r.
    pub fn m(&self) -> usize {
        self.lambda2[0]
    }

    /// True iff of shape (3^p3 1^p1 | 2^q2 1^q1 | (n-r)^1 1^r).
    pub fn is_23_weighted_tree_shape(&self) -> bool {
        self.lambda0.iter().all(|&l| l == 1 || l == 3)
            && self.lambda1.iter().all(|&l| l == 1 || l == 2)
            && self.lambda2.iter().filter(|&&l| l > 1).count() <= 1
    }

    /// Parse strings like `(3^2|2^2 1^2|5 1)`; parts separated by spaces,
    /// `^` gives multiplicity, `|` separates the three partitions.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let comps: Vec<&str> = inner.split('|').collect();
        if comps.len() != 3 {
            return Err(Error::Parse(format!(
                "passport needs three |-separated partitions: {text:?}"
            )));
        }
        let mut lams = Vec::new();
        for comp in comps {
            let mut lam = Vec::new();
            for tok in comp.split_whitespace() {
                let (part, mult) = match tok.split_once('^') {
                    Some((p, m)) => (
                        p.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad part {tok:?}")))?,
                        m.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad multiplicity {tok:?}")))?,
                    ),
                    None => (
                        tok.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad part {tok:?}")))?,
                        1,
                    ),
                };
                for _ in 0..mult {
                    lam.push(part);
                }
            }
            lams.push(lam);
        }
        let l2 = lams.pop().unwrap();
        let l1 = lams.pop().unwrap();
        let l0 = lams.pop().unwrap();
        Passport::new(l0, l1, l2)
    }
}

impl std::fmt::Display for Passport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn fmt_lam(lam: &[usize]) -> String {
            let mut out: Vec<String> = Vec::new();
            let mut i = 0;
            while i < lam.len() {
                let mut j = i;
                while j < lam.len() && lam[j] == lam[i] {
                    j += 1;
                }
                let mult = j - i;
                if mult == 1 {
                    out.push(format!("{}", lam[i]));
                } else {
                    out.push(format!("{}^{}", lam[i], mult));
                }
                i = j;
            }
            out.join(" ")
        }
        write!(
            f,
            "({}|{}|{})",
            fmt_lam(&self.lambda0),
            fmt_lam(&self.lambda1),
            fmt_lam(&self.lambda2)
        )
    }
}
