//! The modular group side of a dessin: the homomorphism to S_n, coset
//! representatives forming the fundamental domain of the index-n subgroup,
//! boundary arcs with their side pairings, and cusp data.

use crate::dessin::Dessin;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use rug::{Complete, Integer};

/// An element of PSL2(Z): integer matrix (p q; r s) with ps - qr = 1,
/// identified with its negative.
#[derive(Clone, Debug)]
pub struct UnimodularMap {
    pub p: Integer,
    pub q: Integer,
    pub r: Integer,
    pub s: Integer,
}

/// A letter in an S,T word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    S,
    /// T^k
    T(Integer),
}

impl UnimodularMap {
    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Self {
        let m = UnimodularMap {
            p: Integer::from(p),
            q: Integer::from(q),
            r: Integer::from(r),
            s: Integer::from(s),
        };
        debug_assert!(m.is_unimodular());
        m
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// S: tau -> -1/tau
    pub fn gen_s() -> Self {
        Self::new(0, -1, 1, 0)
    }

    /// T: tau -> tau + 1
    pub fn gen_t() -> Self {
        Self::new(1, 1, 0, 1)
    }

    pub fn is_unimodular(&self) -> bool {
        let det = (&self.p * &self.s).complete() - (&self.q * &self.r).complete();
        det == 1
    }

    pub fn mul(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            p: (&self.p * &other.p).complete() + (&self.q * &other.r).complete(),
            q: (&self.p * &other.q).complete() + (&self.q * &other.s).complete(),
            r: (&self.r * &other.p).complete() + (&self.s * &other.r).complete(),
            s: (&self.r * &other.q).complete() + (&self.s * &other.s).complete(),
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        UnimodularMap {
            p: self.s.clone(),
            q: (-&self.q).complete(),
            r: (-&self.r).complete(),
            s: self.p.clone(),
        }
    }

    pub fn pow_t(k: &Integer) -> UnimodularMap {
        UnimodularMap {
            p: Integer::from(1),
            q: k.clone(),
            r: Integer::from(0),
            s: Integer::from(1),
        }
    }

    /// Moebius action (p tau + q) / (r tau + s) at tau's precision.
    pub fn apply_c(&self, tau: &rug::Complex) -> rug::Complex {
        let bits = tau.prec().0;
        let f = |i: &Integer| rug::Float::with_val(bits, i);
        let num = rug::Complex::with_val(bits, tau * &f(&self.p)) + f(&self.q);
        let den = rug::Complex::with_val(bits, tau * &f(&self.r)) + f(&self.s);
        rug::Complex::with_val(bits, num / den)
    }

    /// Projective equality (up to global sign).
    pub fn proj_eq(&self, other: &UnimodularMap) -> bool {
        let same = self.p == other.p && self.q == other.q && self.r == other.r && self.s == other.s;
        if same {
            return true;
        }
        self.p == (-&other.p).complete()
            && self.q == (-&other.q).complete()
            && self.r == (-&other.r).complete()
            && self.s == (-&other.s).complete()
    }

    /// Decompose into an S,T word (product left-to-right equals self
    /// projectively), by the Euclidean algorithm on the bottom row.
    pub fn st_word(&self) -> Vec<Letter> {
        let mut m = self.clone();
        let mut ks: Vec<Integer> = Vec::new();
        while m.r != 0 {
            // nearest-integer quotient k = round(s / r)
            let k = round_div(&m.s, &m.r);
            // m <- m * T^{-k} * S
            m = m.mul(&Self::pow_t(&(-k.clone()).into())).mul(&Self::gen_s());
            ks.push(k);
        }
        // now m = +-T^t with p = s = +-1
        debug_assert!(m.p == 1 || m.p == -1);
        let t = (&m.p * &m.q).complete();
        let mut word = Vec::new();
        if t != 0 {
            word.push(Letter::T(t));
        }
        // m_orig = T^t * prod over ks reversed of (S * T^k), since S^{-1} = S in PSL2(Z)
        for k in ks.into_iter().rev() {
            word.push(Letter::S);
            if k != 0 {
                word.push(Letter::T(k));
            }
        }
        if word.is_empty() {
            word.push(Letter::T(Integer::from(0)));
        }
        word
    }

    /// Multiply out an S,T word.
    pub fn from_word(word: &[Letter]) -> UnimodularMap {
        let mut m = UnimodularMap::identity();
        for l in word {
            match l {
                Letter::S => m = m.mul(&Self::gen_s()),
                Letter::T(k) => m = m.mul(&Self::pow_t(k)),
            }
        }
        m
    }
}

/// Rounded integer division a/b (nearest integer, ties toward even keeps
/// determinism; rug rounds half away from zero which is fine here).
fn round_div(a: &Integer, b: &Integer) -> Integer {
    let num = Integer::from(2) * a + b;
    let den = Integer::from(2) * b;
    num.div_rem_floor(den).0
}

impl std::fmt::Display for UnimodularMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.p, self.q, self.r, self.s)
    }
}

/// Sides of the standard cell {|Re| <= 1/2, |tau| >= 1}. The bottom arc of
/// the unit circle is split at the order-2 point i into two halves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    ArcLeftHalf,
    ArcRightHalf,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Side::Left => "L",
            Side::Right => "R",
            Side::ArcLeftHalf => "AL",
            Side::ArcRightHalf => "AR",
        };
        write!(f, "{s}")
    }
}

/// One boundary pasting: the side-pairing element `m` of the subgroup maps
/// the geodesic arc of (src_cell, src_side) onto that of (dst_cell, dst_side).
#[derive(Clone, Debug)]
pub struct BoundaryArc {
    pub src_cell: usize,
    pub src_side: Side,
    pub dst_cell: usize,
    pub dst_side: Side,
    pub pairing: UnimodularMap,
}

/// A tree move used while building the coset representatives.
#[derive(Clone, Debug)]
pub struct TreeEdge {
    pub from: usize,
    pub to: usize,
    /// 'T' or 'S'
    pub generator: char,
}

/// The fundamental domain of the index-n subgroup: n copies of the standard
/// cell, one per dessin edge, with boundary pairings and cusp classes.
#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    pub n: usize,
    /// reps[e] = coset representative of edge e (reps[0] = identity)
    pub reps: Vec<UnimodularMap>,
    pub tree_edges: Vec<TreeEdge>,
    pub arcs: Vec<BoundaryArc>,
    /// cusp classes: cycles of sigma_T (triangle indices), each with its width
    pub cusp_classes: Vec<(Vec<usize>, usize)>,
    pub sigma_s: Permutation,
    pub sigma_t: Permutation,
}

/// The homomorphism Gamma -> S_n determined by the dessin:
/// phi(S) = b, phi(ST) = a, hence phi(T) = b then a.
/// Checks the defining relations S^2 = (ST)^3 = 1.
pub fn monodromy(d: &Dessin) -> Result<(Permutation, Permutation)> {
    let sigma_s = d.b().clone();
    let sigma_t = d.b().then(d.a());
    if !sigma_s.then(&sigma_s).is_identity() {
        return Err(Error::InvalidDessin(
            "sigma_S^2 != id: white rotation b is not an involution (not (2,3)-type)".into(),
        ));
    }
    let st = sigma_s.then(&sigma_t);
    if !st.then(&st).then(&st).is_identity() {
        return Err(Error::InvalidDessin(
            "(sigma_S sigma_T)^3 != id: black rotation a has order > 3 (not (2,3)-type)".into(),
        ));
    }
    Ok((sigma_s, sigma_t))
}

/// Cycle type of sigma_T; equals the face partition lambda_2.
pub fn cusp_widths(d: &Dessin) -> Result<Vec<usize>> {
    let (_, sigma_t) = monodromy(d)?;
    Ok(sigma_t.cycle_type())
}

/// Build coset representatives by BFS from edge 0 (generator T explored
/// before S, edges in ascending label order), collecting side pairings from
/// non-tree moves.
pub fn coset_domain(d: &Dessin) -> Result<FundamentalDomain> {
    let n = d.n();
    let (sigma_s, sigma_t) = monodromy(d)?;
    let gen_t = UnimodularMap::gen_t();
    let gen_s = UnimodularMap::gen_s();

    let mut reps: Vec<Option<UnimodularMap>> = vec![None; n];
    reps[0] = Some(UnimodularMap::identity());
    let mut tree_edges = Vec::new();
    let mut order = vec![0usize];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(0usize);
    while let Some(i) = queue.pop_front() {
        let gi = reps[i].clone().unwrap();
        for (gen, sigma, mat) in [('T', &sigma_t, &gen_t), ('S', &sigma_s, &gen_s)] {
            let j = sigma.apply(i);
            if reps[j].is_none() {
                reps[j] = Some(gi.mul(mat));
                tree_edges.push(TreeEdge {
                    from: i,
                    to: j,
                    generator: gen,
                });
                order.push(j);
                queue.push_back(j);
            }
        }
    }
    if reps.iter().any(|r| r.is_none()) {
        return Err(Error::InvalidDessin("dessin not transitive".into()));
    }
    let reps: Vec<UnimodularMap> = reps.into_iter().map(|r| r.unwrap()).collect();

    // Tree walls are interior; every other generator move produces a pairing.
    let mut interior: std::collections::BTreeSet<(usize, Side)> = std::collections::BTreeSet::new();
    for te in &tree_edges {
        match te.generator {
            'T' => {
                interior.insert((te.from, Side::Right));
                interior.insert((te.to, Side::Left));
            }
            _ => {
                interior.insert((te.from, Side::ArcRightHalf));
                interior.insert((te.to, Side::ArcLeftHalf));
            }
        }
    }

    let mut arcs = Vec::new();
    for i in 0..n {
        // T-move: pastes (j, Left) onto (i, Right) via m = g_i T g_j^{-1}
        let j = sigma_t.apply(i);
        if !interior.contains(&(i, Side::Right)) {
            let m = reps[i].mul(&gen_t).mul(&reps[j].inverse());
            arcs.push(BoundaryArc {
                src_cell: j,
                src_side: Side::Left,
                dst_cell: i,
                dst_side: Side::Right,
                pairing: m,
            });
        }
        // S-move: pastes (j, ArcLeftHalf) onto (i, ArcRightHalf) via g_i S g_j^{-1}
        let j = sigma_s.apply(i);
        if !interior.contains(&(i, Side::ArcRightHalf)) {
            let m = reps[i].mul(&gen_s).mul(&reps[j].inverse());
            arcs.push(BoundaryArc {
                src_cell: j,
                src_side: Side::ArcLeftHalf,
                dst_cell: i,
                dst_side: Side::ArcRightHalf,
                pairing: m,
            });
        }
    }

    let cusp_classes: Vec<(Vec<usize>, usize)> = sigma_t
        .cycles()
        .into_iter()
        .map(|c| {
            let w = c.len();
            (c, w)
        })
        .collect();

    Ok(FundamentalDomain {
        n,
        reps,
        tree_edges,
        arcs,
        cusp_classes,
        sigma_s,
        sigma_t,
    })
}

/// True iff m lies in the dessin's subgroup: the coset action of m
/// (through the S,T word of m) fixes edge 0.
pub fn membership_check(m: &UnimodularMap, d: &Dessin) -> Result<bool> {
    let (sigma_s, sigma_t) = monodromy(d)?;
    let word = m.st_word();
    // sanity: the word must reproduce m projectively
    debug_assert!(UnimodularMap::from_word(&word).proj_eq(m));
    let cycles = sigma_t.cycles();
    let mut x = 0usize;
    for l in &word {
        match l {
            Letter::S => x = sigma_s.apply(x),
            Letter::T(k) => {
                // advance x within its sigma_T cycle by k (mod cycle length)
                let cyc = cycles.iter().find(|c| c.contains(&x)).unwrap();
                let pos = cyc.iter().position(|&y| y == x).unwrap();
                let step = k
                    .clone()
                    .div_rem_euc(Integer::from(cyc.len()))
                    .1
                    .to_usize()
                    .unwrap();
                x = cyc[(pos + step) % cyc.len()];
            }
        }
    }
    Ok(x == 0)
}

impl FundamentalDomain {
    /// Stable debug dump: one line per cell, one line per arc.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut parent: Vec<Option<(usize, char)>> = vec![None; self.n];
        for te in &self.tree_edges {
            parent[te.to] = Some((te.from, te.generator));
        }
        for (i, g) in self.reps.iter().enumerate() {
            match parent[i] {
                Some((p, c)) => out.push_str(&format!("{i}  {g}  {p}  {c}\n")),
                None => out.push_str(&format!("{i}  {g}  -  -\n")),
            }
        }
        for a in &self.arcs {
            out.push_str(&format!(
                "{}.{} ~ {}.{} via {}\n",
                a.src_cell, a.src_side, a.dst_cell, a.dst_side, a.pairing
            ));
        }
        out
    }
}
