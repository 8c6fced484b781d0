//! Exhaustive realization of a passport by permutation pairs, up to
//! simultaneous conjugation, with canonical class representatives.

use crate::dessin::{Dessin, Passport};
use crate::error::{Error, Result};
use crate::group::{group_order, is_primitive};
use crate::perm::Permutation;
use std::collections::BTreeSet;

/// Class filters applied during realization search.
#[derive(Clone, Debug, Default)]
pub struct Filters {
    pub genus: Option<usize>,
    pub primitive: Option<bool>,
    pub group_order: Option<u64>,
}

impl Filters {
    fn accept(&self, d: &Dessin) -> bool {
        if let Some(g) = self.genus {
            if d.genus().ok() != Some(g) {
                return false;
            }
        }
        if let Some(p) = self.primitive {
            if is_primitive(d) != p {
                return false;
            }
        }
        if let Some(ord) = self.group_order {
            if group_order(d) != ord {
                return false;
            }
        }
        true
    }
}

/// Largest degree for which the exhaustive search is attempted.
pub const EXHAUSTIVE_LIMIT: usize = 14;

/// Canonical class representative: the lexicographically least image pair
/// over BFS relabelings from every base point. Two transitive pairs are
/// simultaneously conjugate iff their canonical forms agree, since an
/// intertwining bijection is determined by the image of a single point.
pub fn canonical_form(d: &Dessin) -> Dessin {
    let n = d.n();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for s in 0..n {
        let map = bfs_relabel(d, s);
        let ca = d.a().relabel(&map);
        let cb = d.b().relabel(&map);
        let key = (ca.images().to_vec(), cb.images().to_vec());
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }
    }
    let (ia, ib) = best.unwrap();
    Dessin::with_label(
        Permutation::from_images(ia).unwrap(),
        Permutation::from_images(ib).unwrap(),
        d.label.clone(),
    )
    .unwrap()
}

/// BFS from `start`, exploring a before b, assigning labels in visit order.
fn bfs_relabel(d: &Dessin, start: usize) -> Vec<usize> {
    let n = d.n();
    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = std::collections::VecDeque::new();
    map[start] = next;
    next += 1;
    queue.push_back(start);
    while let Some(x) = queue.pop_front() {
        for y in [d.a().apply(x), d.b().apply(x)] {
            if map[y] == usize::MAX {
                map[y] = next;
                next += 1;
                queue.push_back(y);
            }
        }
    }
    map
}

/// All dessins realizing the passport, filtered and canonicalized, one
/// representative per simultaneous-conjugacy class, in lexicographic order.
///
/// Exhaustive (and guaranteed complete) for n <= EXHAUSTIVE_LIMIT.
pub fn realizations_of_passport(p: &Passport, filters: &Filters) -> Result<Vec<Dessin>> {
    let n = p.n();
    if p.lambda1.iter().sum::<usize>() != n || p.lambda2.iter().sum::<usize>() != n {
        return Err(Error::Parse("passport partitions do not sum to n".into()));
    }
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::LimitExceeded(format!(
            "exhaustive realization search supports n <= {EXHAUSTIVE_LIMIT}, got {n}"
        )));
    }
    // Fix a as the canonical permutation of type lambda0 on consecutive blocks.
    let a = canonical_of_type(n, &p.lambda0);
    let mut target2 = p.lambda2.clone();
    target2.sort_unstable_by(|x, y| y.cmp(x));

    let mut classes: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
    let mut state = TypeEnum::new(n, &p.lambda1);
    state.run(&mut |b_images| {
        let b = Permutation::from_images(b_images.to_vec()).unwrap();
        if a.then(&b).cycle_type() != target2 {
            return;
        }
        let Ok(d) = Dessin::new(a.clone(), b) else {
            return; // not transitive
        };
        if !filters.accept(&d) {
            return;
        }
        let c = canonical_form(&d);
        classes.insert((c.a().images().to_vec(), c.b().images().to_vec()));
    });

    let out: Vec<Dessin> = classes
        .into_iter()
        .map(|(ia, ib)| {
            Dessin::new(
                Permutation::from_images(ia).unwrap(),
                Permutation::from_images(ib).unwrap(),
            )
            .unwrap()
        })
        .collect();
    if out.is_empty() {
        return Err(Error::Unrealizable(format!(
            "no dessin with passport {p} passes the filters"
        )));
    }
    Ok(out)
}

fn canonical_of_type(n: usize, lam: &[usize]) -> Permutation {
    let mut cycles = Vec::new();
    let mut next = 1usize;
    for &l in lam {
        cycles.push((next..next + l).collect::<Vec<_>>());
        next += l;
    }
    debug_assert_eq!(next, n + 1);
    Permutation::from_cycles(n, &cycles).unwrap()
}

/// Enumerates every permutation with a given multiset of cycle lengths,
/// exactly once: each new cycle starts at the least unused point (hence at
/// the least point of that cycle), so every cycle arrangement is produced
/// in a unique writing.
struct TypeEnum {
    n: usize,
    images: Vec<usize>,
    used: Vec<bool>,
    /// (cycle length, remaining count), decreasing by length
    remaining: Vec<(usize, usize)>,
    placed: usize,
}

impl TypeEnum {
    fn new(n: usize, lam: &[usize]) -> Self {
        let mut remaining: Vec<(usize, usize)> = Vec::new();
        for &l in lam {
            match remaining.iter_mut().find(|(ll, _)| *ll == l) {
                Some((_, c)) => *c += 1,
                None => remaining.push((l, 1)),
            }
        }
        remaining.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        TypeEnum {
            n,
            images: vec![usize::MAX; n],
            used: vec![false; n],
            remaining,
            placed: 0,
        }
    }

    fn run(&mut self, emit: &mut impl FnMut(&[usize])) {
        if self.placed == self.n {
            emit(&self.images);
            return;
        }
        let start = (0..self.n).find(|&x| !self.used[x]).unwrap();
        for li in 0..self.remaining.len() {
            if self.remaining[li].1 == 0 {
                continue;
            }
            let len = self.remaining[li].0;
            self.remaining[li].1 -= 1;
            self.used[start] = true;
            self.placed += 1;
            self.extend_cycle(start, start, len - 1, emit);
            self.placed -= 1;
            self.used[start] = false;
            self.remaining[li].1 += 1;
        }
    }

    fn extend_cycle(
        &mut self,
        first: usize,
        prev: usize,
        slots: usize,
        emit: &mut impl FnMut(&[usize]),
    ) {
        if slots == 0 {
            self.images[prev] = first;
            self.run(emit);
            self.images[prev] = usize::MAX;
            return;
        }
        for next in 0..self.n {
            if self.used[next] {
                continue;
            }
            self.images[prev] = next;
            self.used[next] = true;
            self.placed += 1;
            self.extend_cycle(first, next, slots - 1, emit);
            self.placed -= 1;
            self.used[next] = false;
            self.images[prev] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_passport() {
        let p = Passport::parse("(1|1|1)").unwrap();
        let out = realizations_of_passport(&p, &Filters::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].n(), 1);
    }

    #[test]
    fn orbit_6_1_unique() {
        let p = Passport::parse("(3^2|2^2 1^2|5 1)").unwrap();
        let f = Filters {
            genus: Some(0),
            primitive: Some(true),
            group_order: Some(60),
        };
        let out = realizations_of_passport(&p, &f).unwrap();
        assert_eq!(out.len(), 1);
        let d = &out[0];
        assert!(d.is_23_type());
        assert!(d.is_weighted_tree());
        assert_eq!(group_order(d), 60);
    }

    #[test]
    fn orbit_7_1_mirror_pair() {
        let p = Passport::parse("(3^2 1|2^3 1|6 1)").unwrap();
        let f = Filters {
            genus: Some(0),
            primitive: Some(true),
            group_order: Some(42),
        };
        let out = realizations_of_passport(&p, &f).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn canonical_is_idempotent() {
        let p = Passport::parse("(3^2|2^2 1^2|5 1)").unwrap();
        let f = Filters {
            genus: Some(0),
            primitive: Some(true),
            group_order: Some(60),
        };
        for d in realizations_of_passport(&p, &f).unwrap() {
            let c = canonical_form(&d);
            assert_eq!(c, d);
        }
    }

    #[test]
    fn unrealizable_passport() {
        // partitions sum correctly but no transitive pair exists with these types
        let p = Passport::parse("(1 1|1 1|2)").unwrap();
        assert!(realizations_of_passport(&p, &Filters::default()).is_err());
    }
}
