//! Exact small-instance oracles: the minimal domination number γ_n for
//! n ≤ 6 and the maximal 3-separated set size λ(s) for s ≤ 8.

use crate::bounds::lambda_lower;
use crate::codes::separated_code;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;
use crate::word::Word;

pub const GAMMA_MAX_N: usize = 6;
pub const LAMBDA_MAX_S: usize = 8;

/// An exact value with a set attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact {
    pub value: usize,
    pub witness: VertexSet,
}

/// Exact γ_n by set-cover branch and bound.
///
/// Iterative deepening from the sphere-covering bound `⌈2^n/(n+1)⌉`. Each
/// level branches on the dominators of the lowest-index uncovered vertex;
/// dominators already tried at a level are excluded from later siblings so
/// each subset is visited once. Vertex 0 is fixed in the set (translation
/// invariance).
pub fn brute_force_gamma(n: usize) -> Result<Exact> {
    if n == 0 || n > GAMMA_MAX_N {
        return Err(Error::SearchInfeasible { what: "brute_force_gamma", n, max: GAMMA_MAX_N });
    }
    let vertices = 1usize << n;
    let full = if vertices == 64 { u64::MAX } else { (1u64 << vertices) - 1 };
    let balls: Vec<u64> = (0..vertices)
        .map(|v| (0..n).fold(1u64 << v, |acc, j| acc | 1u64 << (v ^ (1 << j))))
        .collect();
    let search = GammaSearch { full, balls };

    let mut budget = vertices.div_ceil(n + 1);
    loop {
        let mut chosen = vec![0usize];
        if search.extend(search.balls[0], 0, budget - 1, &mut chosen) {
            let witness = VertexSet::new(n, chosen.iter().map(|&v| Word::from_index(n, v as u64)))?;
            return Ok(Exact { value: chosen.len(), witness });
        }
        budget += 1;
    }
}

struct GammaSearch {
    full: u64,
    balls: Vec<u64>,
}

impl GammaSearch {
    fn extend(&self, covered: u64, forbidden: u64, budget: usize, chosen: &mut Vec<usize>) -> bool {
        if covered == self.full {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let uncovered = self.full & !covered;
        let available = self.full & !forbidden;

        let mut best_gain = 0;
        let mut rest = available;
        while rest != 0 {
            let d = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            best_gain = best_gain.max((self.balls[d] & uncovered).count_ones());
        }
        if uncovered.count_ones() > budget as u32 * best_gain {
            return false;
        }
        let mut rest = uncovered;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.balls[v] & available == 0 {
                return false;
            }
        }

        let v = uncovered.trailing_zeros() as usize;
        let mut forbidden = forbidden;
        let mut cands = self.balls[v] & available;
        while cands != 0 {
            let d = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            chosen.push(d);
            if self.extend(covered | self.balls[d], forbidden, budget - 1, chosen) {
                return true;
            }
            chosen.pop();
            forbidden |= 1u64 << d;
        }
        false
    }
}

/// Exact λ(s) by maximum-clique search on the distance-≥3 graph of Q_s.
///
/// Seeded with the recursive construction from [`separated_code`]. Any code
/// with two or more words can be translated to contain 0 and permuted so a
/// minimum-weight nonzero codeword is `1^w 0^(s−w)`; the search runs once per
/// `w` over words of weight ≥ `w` compatible with both.
pub fn brute_force_lambda(s: usize) -> Result<Exact> {
    if s == 0 || s > LAMBDA_MAX_S {
        return Err(Error::SearchInfeasible { what: "brute_force_lambda", n: s, max: LAMBDA_MAX_S });
    }
    let seed = separated_code(s)?;
    debug_assert_eq!(seed.len() as u64, lambda_lower(s));
    let mut best: Vec<usize> = seed.iter().map(|w| w.to_index().unwrap() as usize).collect();

    let vertices = 1usize << s;
    let adj: Vec<Bits> = (0..vertices)
        .map(|v| {
            let mut b = Bits::default();
            for u in 0..vertices {
                if (u ^ v).count_ones() >= 3 {
                    b.insert(u);
                }
            }
            b
        })
        .collect();

    for w in 3..=s {
        let anchor = ((1usize << w) - 1) << (s - w);
        let cands: Vec<usize> = (0..vertices)
            .filter(|&v| v != anchor && v.count_ones() as usize >= w && adj[anchor].contains(v))
            .collect();
        // relabel by decreasing degree inside the candidate graph so the
        // greedy colouring gives tighter bounds
        let mut order = cands.clone();
        let degree = |v: usize| cands.iter().filter(|&&u| adj[v].contains(u)).count();
        order.sort_by_key(|&v| (std::cmp::Reverse(degree(v)), v));
        let local: Vec<Bits> = order
            .iter()
            .map(|&v| {
                let mut b = Bits::default();
                for (j, &u) in order.iter().enumerate() {
                    if adj[v].contains(u) {
                        b.insert(j);
                    }
                }
                b
            })
            .collect();
        let mut all = Bits::default();
        (0..order.len()).for_each(|j| all.insert(j));
        let mut clique = MaxClique { adj: &local, best: Vec::new(), floor: best.len().saturating_sub(2) };
        clique.expand(&mut Vec::new(), all);
        if clique.best.len() + 2 > best.len() {
            best = [0, anchor].into_iter().chain(clique.best.iter().map(|&j| order[j])).collect();
        }
    }

    let witness = VertexSet::new(s, best.iter().map(|&v| Word::from_index(s, v as u64)))?;
    Ok(Exact { value: witness.len(), witness })
}

/// Bitset over at most 256 vertices.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Bits([u64; 4]);

impl Bits {
    fn insert(&mut self, v: usize) {
        self.0[v >> 6] |= 1u64 << (v & 63);
    }
    fn remove(&mut self, v: usize) {
        self.0[v >> 6] &= !(1u64 << (v & 63));
    }
    fn contains(&self, v: usize) -> bool {
        self.0[v >> 6] >> (v & 63) & 1 == 1
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits([self.0[0] & o.0[0], self.0[1] & o.0[1], self.0[2] & o.0[2], self.0[3] & o.0[3]])
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(i, &x)| i * 64 + x.trailing_zeros() as usize)
    }
}

struct MaxClique<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    /// Only cliques strictly larger than this are of interest.
    floor: usize,
}

impl MaxClique<'_> {
    fn target(&self) -> usize {
        self.best.len().max(self.floor)
    }

    /// Greedy sequential colouring; returns vertices with their colour
    /// numbers in non-decreasing colour order.
    fn colour(&self, p: Bits) -> Vec<(usize, usize)> {
        let mut order = Vec::new();
        let mut uncoloured = p;
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured;
            while let Some(v) = q.first() {
                q.remove(v);
                uncoloured.remove(v);
                // drop neighbours (compatible words) from this colour class
                q = Bits([
                    q.0[0] & !self.adj[v].0[0],
                    q.0[1] & !self.adj[v].0[1],
                    q.0[2] & !self.adj[v].0[2],
                    q.0[3] & !self.adj[v].0[3],
                ]);
                order.push((v, colour));
            }
        }
        order
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: Bits) {
        let order = self.colour(p);
        for &(v, c) in order.iter().rev() {
            if r.len() + c <= self.target() {
                return;
            }
            r.push(v);
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                if r.len() > self.target() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, next);
            }
            r.pop();
            p.remove(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::{check_domination, is_k_separated};

    #[test]
    fn gamma_small_values() {
        for (n, expected) in [(1, 1), (2, 2), (3, 2), (4, 4)] {
            let r = brute_force_gamma(n).unwrap();
            assert_eq!(r.value, expected, "gamma_{n}");
            assert!(check_domination(n, &r.witness).unwrap().is_dominated());
        }
    }

    #[test]
    fn gamma_refuses_large_n() {
        assert!(matches!(brute_force_gamma(7), Err(Error::SearchInfeasible { .. })));
        assert!(brute_force_gamma(0).is_err());
    }

    /// Independent oracle for γ_3: the smallest k such that some k-subset of
    /// Q_3 dominates, by plain enumeration.
    #[test]
    fn gamma_3_by_subset_enumeration() {
        let balls: Vec<u8> = (0..8u8).map(|v| (0..3).fold(1 << v, |a, j| a | 1 << (v ^ 1 << j))).collect();
        let min = (1u32..256)
            .filter(|mask| (0..8).filter(|&v| mask >> v & 1 == 1).fold(0u8, |a, v| a | balls[v]) == 0xff)
            .map(|mask| mask.count_ones())
            .min()
            .unwrap();
        assert_eq!(min, 2);
        assert_eq!(brute_force_gamma(3).unwrap().value, 2);
    }

    #[test]
    fn lambda_small_values() {
        for (s, expected) in [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4)] {
            let r = brute_force_lambda(s).unwrap();
            assert_eq!(r.value, expected, "lambda({s})");
            assert!(is_k_separated(&r.witness, 3).separated);
        }
    }

    /// Independent oracle for λ(4), λ(5): enumerate all subsets of Q_s that
    /// contain 0 and check pairwise distances directly.
    #[test]
    fn lambda_by_subset_enumeration() {
        for (s, expected) in [(4usize, 2usize), (5, 4)] {
            let verts: Vec<u32> = (1..1u32 << s).filter(|v| v.count_ones() >= 3).collect();
            let mut best = 1;
            // subsets of the weight≥3 words, grown by DFS with pairwise checks
            fn dfs(verts: &[u32], start: usize, cur: &mut Vec<u32>, best: &mut usize) {
                *best = (*best).max(cur.len() + 1);
                for i in start..verts.len() {
                    if cur.iter().all(|&c| (c ^ verts[i]).count_ones() >= 3) {
                        cur.push(verts[i]);
                        dfs(verts, i + 1, cur, best);
                        cur.pop();
                    }
                }
            }
            dfs(&verts, 0, &mut Vec::new(), &mut best);
            assert_eq!(best, expected);
        }
    }

    #[test]
    fn lambda_refuses_large_s() {
        assert!(matches!(brute_force_lambda(9), Err(Error::SearchInfeasible { .. })));
    }
}
