//! The wedge construction: from a graph-form perfect code Δ of Q_l and an
//! m-decomposition of l, build a dominating set of Q_{m+θ+l} that beats the
//! plain product bound by removing `2^m·|E|` words.
//!
//! Every word of length `l` is split as `s_1 | … | s_q | θ−1 | m`. The maps
//! below follow that layout throughout.

use std::collections::BTreeMap;

use num_integer::Roots;
use rayon::prelude::*;

use crate::codes::{separated_code, GraphCode};
use crate::coverage::is_k_separated;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;
use crate::word::{Block, SplitLayout, Word};

/// `Θ(q) = (θ, ξ)`: θ is the least integer with `1+…+θ ≥ q` and ξ the excess.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaPair {
    pub q: u64,
    pub theta: u64,
    pub xi: u64,
}

/// `Θ²(q) = (θ, ξ, ψ, ξ')` with `(ψ, ξ') = Θ(ξ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theta2 {
    pub theta: u64,
    pub xi: u64,
    pub psi: u64,
    pub xi_prime: u64,
}

pub fn theta(q: u64) -> ThetaPair {
    let mut t = ((8 * q + 1).sqrt() - 1) / 2;
    while t * (t + 1) / 2 < q {
        t += 1;
    }
    ThetaPair { q, theta: t, xi: t * (t + 1) / 2 - q }
}

pub fn theta2(q: u64) -> Theta2 {
    let a = theta(q);
    let b = theta(a.xi);
    Theta2 { theta: a.theta, xi: a.xi, psi: b.theta, xi_prime: b.xi }
}

/// `θ + m + Σ = l + 1` with `S ⊂ {1, …, θ−1}` strictly increasing and θ
/// taken from `Θ(l+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MDecomposition {
    l: usize,
    m: usize,
    theta: usize,
    s: Vec<usize>,
    sigma: usize,
}

impl MDecomposition {
    pub fn new(l: usize, m: usize, s: Vec<usize>) -> Result<Self> {
        let theta = theta(l as u64 + 1).theta as usize;
        if s.first() == Some(&0) || s.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidDecomposition(format!("S = {s:?} must be strictly increasing and positive")));
        }
        if s.last().is_some_and(|&top| top >= theta) {
            return Err(Error::InvalidDecomposition(format!("S = {s:?} must lie below theta = {theta}")));
        }
        let sigma: usize = s.iter().sum();
        if theta + m + sigma != l + 1 {
            return Err(Error::InvalidDecomposition(format!(
                "theta {theta} + m {m} + sigma {sigma} != l + 1 = {}",
                l + 1
            )));
        }
        Ok(Self { l, m, theta, s, sigma })
    }

    pub fn l(&self) -> usize {
        self.l
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn theta(&self) -> usize {
        self.theta
    }
    pub fn s(&self) -> &[usize] {
        &self.s
    }
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// `m < θ − |S|`, the hypothesis of the construction.
    pub fn satisfies_theorem(&self) -> bool {
        self.m + self.s.len() < self.theta
    }

    /// `{1, …, θ−1} ∖ S`.
    pub fn complement(&self) -> Vec<usize> {
        (1..self.theta).filter(|k| !self.s.contains(k)).collect()
    }

    pub fn layout(&self) -> SplitLayout {
        SplitLayout::new(self.l, self.m, &self.s, self.theta).expect("decomposition implies a valid layout")
    }

    /// Length of the word the construction dominates, `m + θ + l`.
    pub fn target_n(&self) -> usize {
        self.m + self.theta + self.l
    }
}

/// The canonical decomposition of `l = 2^n̂ − 1` for `0 ≤ m ≤ ψ`.
///
/// With `(θ, ξ, ψ, ξ') = Θ²(2^n̂)`: `S = {ξ'−m} ∪ {ψ+1, …, θ−1}` for `m < ξ'`
/// and `S = {ψ+1−m+ξ'} ∪ {ψ+2, …, θ−1}` for `ξ' ≤ m ≤ ψ`.
pub fn canonical_decomposition(nhat: usize, m: usize) -> Result<MDecomposition> {
    if !(3..=40).contains(&nhat) {
        return Err(Error::OutOfRange(format!("canonical decompositions need 3 <= nhat, got {nhat}")));
    }
    let t = theta2(1 << nhat);
    let (theta, psi, xp) = (t.theta as usize, t.psi as usize, t.xi_prime as usize);
    if m > psi {
        return Err(Error::OutOfRange(format!("m = {m} exceeds psi = {psi} for nhat = {nhat}")));
    }
    let s: Vec<usize> = if m < xp {
        std::iter::once(xp - m).chain(psi + 1..theta).collect()
    } else {
        std::iter::once(psi + 1 - m + xp).chain(psi + 2..theta).collect()
    };
    MDecomposition::new((1 << nhat) - 1, m, s)
}

/// Every decomposition of `l` with tail `m` satisfying `m < θ − |S|`, in
/// lexicographic order of `S`.
pub fn enumerate_decompositions(l: usize, m: usize) -> Vec<MDecomposition> {
    let theta = theta(l as u64 + 1).theta as usize;
    let Some(target) = (l + 1).checked_sub(theta + m) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn walk(
        next: usize,
        theta: usize,
        remaining: usize,
        max_len: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_len || next >= theta {
            return;
        }
        // the largest parts still available must be able to reach `remaining`
        let slots = (max_len - cur.len()).min(theta - next);
        let top = slots * (2 * theta - 1 - slots) / 2;
        if top < remaining {
            return;
        }
        for s in next..theta.min(remaining + 1) {
            cur.push(s);
            walk(s + 1, theta, remaining - s, max_len, cur, out);
            cur.pop();
        }
    }
    if m < theta {
        let mut sets = Vec::new();
        walk(1, theta, target, theta - m - 1, &mut cur, &mut sets);
        out.extend(sets.into_iter().map(|s| MDecomposition::new(l, m, s).expect("enumerated sets are valid")));
    }
    out
}

/// A per-block 3-separated code `C_s` for each `s ∈ S` and the members `E` of
/// the graph code whose s-blocks all lie in their `C_s`.
#[derive(Clone, Debug)]
pub struct AdmissibleSelection {
    codes: BTreeMap<usize, VertexSet>,
    e: VertexSet,
    projections: BTreeMap<usize, VertexSet>,
}

impl AdmissibleSelection {
    pub fn codes(&self) -> &BTreeMap<usize, VertexSet> {
        &self.codes
    }

    pub fn e(&self) -> &VertexSet {
        &self.e
    }

    /// `π^(s)(E) ⊆ C_s`.
    pub fn projection(&self, s: usize) -> Option<&VertexSet> {
        self.projections.get(&s)
    }

    fn from_parts(codes: BTreeMap<usize, VertexSet>, e: VertexSet, layout: &SplitLayout) -> Result<Self> {
        let mut projections = BTreeMap::new();
        for (&s, c) in &codes {
            let p = VertexSet::collect_dedup(s, e.iter().map(|w| layout.project(w, Block::S(s)).unwrap()))?;
            if !p.is_subset(c) {
                return Err(Error::NotAdmissible(format!("E projects outside C_{s}")));
            }
            projections.insert(s, p);
        }
        Ok(Self { codes, e, projections })
    }
}

/// Largest E or D this module will materialise.
pub const MAX_MATERIALISED: u64 = 1 << 26;

/// Builds E for a graph code of Q_l and a decomposition of l.
///
/// The s-blocks must sit inside the free coordinates of the code, so E is
/// enumerated directly as `C_{s_1} × … × C_{s_q} × Q_{free_len−Σ}` pushed
/// through `x ↦ x·h(x)`. Missing entries of `codes_by_s` default to
/// [`separated_code`].
pub fn build_admissible(
    code: &GraphCode,
    decomp: &MDecomposition,
    codes_by_s: &BTreeMap<usize, VertexSet>,
) -> Result<AdmissibleSelection> {
    if code.dim() != decomp.l() {
        return Err(Error::DimensionMismatch { set: code.dim(), requested: decomp.l() });
    }
    if decomp.sigma() > code.free_len() {
        let layout = decomp.layout();
        let overlapping: Vec<usize> = decomp
            .s()
            .iter()
            .copied()
            .filter(|&s| {
                let (start, len) = layout.span(Block::S(s)).unwrap();
                start + len > code.free_len()
            })
            .collect();
        return Err(Error::AdmissibleOverlap(format!(
            "blocks {overlapping:?} reach past the {} free letters into the {} determined ones",
            code.free_len(),
            code.nhat()
        )));
    }
    let mut codes = BTreeMap::new();
    for &s in decomp.s() {
        let c = match codes_by_s.get(&s) {
            Some(c) => c.clone(),
            None => separated_code(s)?,
        };
        if c.dim() != s {
            return Err(Error::DimensionMismatch { set: c.dim(), requested: s });
        }
        if c.is_empty() {
            return Err(Error::NotAdmissible(format!("C_{s} is empty")));
        }
        let sep = is_k_separated(&c, 3);
        if !sep.separated {
            let (a, b) = sep.witness.unwrap();
            return Err(Error::NotAdmissible(format!("C_{s} has {a} and {b} within distance 2")));
        }
        codes.insert(s, c);
    }

    let rest = code.free_len() - decomp.sigma();
    let size = codes.values().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
    let size = size.and_then(|p| 1u64.checked_shl(rest as u32).and_then(|r| p.checked_mul(r)));
    if size.is_none_or(|n| n > MAX_MATERIALISED) {
        return Err(Error::TooLarge(format!("E would have more than {MAX_MATERIALISED} members")));
    }
    let mut prefixes = vec![Word::empty()];
    for c in codes.values() {
        prefixes = prefixes.iter().flat_map(|p| c.iter().map(move |w| p.concat(w))).collect();
    }
    let members = prefixes
        .iter()
        .flat_map(|p| (0..1u64 << rest).map(move |r| code.encode(&p.concat(&Word::from_index(rest, r)))))
        .collect::<Vec<_>>();
    let e = VertexSet::new(code.dim(), members)?;
    AdmissibleSelection::from_parts(codes, e, &decomp.layout())
}

/// Where `t` marks the (θ−1)-block for an `x` whose last 1 is at position
/// `k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum TailEncoding {
    /// Block position `k`: `x` with its first letter dropped.
    DropFirst,
    /// Block position `k + 1`, out-of-range marks dropped. Kept only to show
    /// in tests that this placement leaves vertices undominated.
    #[cfg_attr(not(test), allow(dead_code))]
    ShiftedByOne,
}

/// The maps ρ, t, f, a and g for one decomposition and selection.
pub struct WedgeMaps<'a> {
    decomp: &'a MDecomposition,
    selection: &'a AdmissibleSelection,
    layout: SplitLayout,
    a_values: Vec<usize>,
    encoding: TailEncoding,
}

impl<'a> WedgeMaps<'a> {
    pub fn new(decomp: &'a MDecomposition, selection: &'a AdmissibleSelection) -> Result<Self> {
        Self::with_encoding(decomp, selection, TailEncoding::DropFirst)
    }

    pub(crate) fn with_encoding(
        decomp: &'a MDecomposition,
        selection: &'a AdmissibleSelection,
        encoding: TailEncoding,
    ) -> Result<Self> {
        if !decomp.satisfies_theorem() {
            return Err(Error::InvalidDecomposition(format!(
                "m = {} is not below theta - |S| = {}",
                decomp.m(),
                decomp.theta() - decomp.s().len()
            )));
        }
        if selection.codes.keys().copied().ne(decomp.s().iter().copied()) {
            return Err(Error::NotAdmissible("selection blocks differ from S".into()));
        }
        let eligible: Vec<usize> = match encoding {
            TailEncoding::DropFirst => decomp.complement(),
            TailEncoding::ShiftedByOne => decomp.complement().into_iter().filter(|&k| k + 2 <= decomp.theta()).collect(),
        };
        if eligible.len() < decomp.m() {
            return Err(Error::NotAdmissible(format!(
                "need {} values outside S for the a-map, have {eligible:?}",
                decomp.m()
            )));
        }
        let a_values = eligible[..decomp.m()].to_vec();
        Ok(Self { decomp, selection, layout: decomp.layout(), a_values, encoding })
    }

    pub fn layout(&self) -> &SplitLayout {
        &self.layout
    }

    /// `a(1) < … < a(m)`, the images of the unit words under `a`.
    pub fn a_values(&self) -> &[usize] {
        &self.a_values
    }

    fn head_len(&self) -> usize {
        self.decomp.l() - self.decomp.m()
    }

    /// `ρ(x, z)`: `x·z`, except that when the last 1 of `x` sits just after
    /// a prefix `y` of length `s ∈ S` the prefix and the s-block of `z` swap.
    pub fn rho(&self, x: &Word, z: &Word) -> Result<Word> {
        self.check(x, self.decomp.theta(), "x")?;
        self.check(z, self.head_len(), "z")?;
        let (k, y) = x.iota_decompose();
        if k >= 1 && self.decomp.s().contains(&(k as usize)) {
            let s = k as usize;
            let zs = self.layout.project(z, Block::S(s))?;
            let front = Word::iota_embed(self.decomp.theta(), k, &zs)?;
            return Ok(front.concat(&self.layout.replace(z, Block::S(s), &y)?));
        }
        Ok(x.concat(z))
    }

    /// `t(x) ∈ Q_{l−m}`.
    ///
    /// * `x = 0` or `x = 10…0`: zero.
    /// * last 1 at `k+1` with `k ∉ S`: `0^Σ · x₂…x_θ`, so the unit word with
    ///   its 1 at `k+1` goes to the unit word at `Σ+k`.
    /// * `k = s ∈ S` with prefix `y`: if some `c ∈ π^(s)(E)` is within
    ///   distance 1 of `y` (unique, since `C_s` is 3-separated), `e_s(c)`
    ///   plus the unit word at `Σ+s` when `y = c`; otherwise zero.
    ///
    /// Pairing the k-th letter of the (θ−1)-block with the `(k+1)`-th letter
    /// of `x` is what lets the removed words be re-dominated; see the
    /// module tests for the failure of the shifted placement.
    pub fn t(&self, x: &Word) -> Result<Word> {
        self.check(x, self.decomp.theta(), "x")?;
        let head = self.head_len();
        let sigma = self.decomp.sigma();
        let (k, y) = x.iota_decompose();
        if k <= 0 {
            return Ok(Word::zeros(head));
        }
        let k = k as usize;
        if !self.decomp.s().contains(&k) {
            let tail = match self.encoding {
                TailEncoding::DropFirst => x.slice0(1, self.decomp.theta() - 1),
                TailEncoding::ShiftedByOne => {
                    let mut w = x.slice0(0, self.decomp.theta() - 1);
                    if k + 1 > self.decomp.theta() - 1 {
                        w = y.concat(&Word::zeros(self.decomp.theta() - 1 - k));
                    }
                    w
                }
            };
            return Ok(Word::zeros(sigma).concat(&tail));
        }
        let proj = self.selection.projection(k).expect("blocks checked at construction");
        let mut hits = std::iter::once(y.clone()).chain(y.neighbours()).filter(|c| proj.contains(c));
        let Some(c) = hits.next() else {
            return Ok(Word::zeros(head));
        };
        if let Some(other) = hits.next() {
            return Err(Error::Invariant(format!("{y} is within distance 1 of both {c} and {other} in C_{k}")));
        }
        let mut out = self.layout.embed_block(k, &c)?;
        if c == y {
            let pos = match self.encoding {
                TailEncoding::DropFirst => sigma + k,
                TailEncoding::ShiftedByOne => sigma + k + 1,
            };
            if pos <= head {
                out = out.flipped(pos);
            }
        }
        Ok(out)
    }

    /// `f(x, z) = ρ(x, z + t(x))`, an isometry in `z` for each fixed `x`.
    pub fn f(&self, x: &Word, z: &Word) -> Result<Word> {
        let shifted = z.xor(&self.t(x)?)?;
        self.rho(x, &shifted)
    }

    /// The linear map sending the i-th unit word of `Q_m` to the unit word of
    /// `Q_θ` with its 1 at `a(i) + 1`.
    pub fn a(&self, alpha: &Word) -> Result<Word> {
        self.check(alpha, self.decomp.m(), "alpha")?;
        let mut out = Word::zeros(self.decomp.theta());
        for (i, &ai) in self.a_values.iter().enumerate() {
            if alpha.get(i + 1) {
                out = out.flipped(ai + 1);
            }
        }
        Ok(out)
    }

    /// `g(α, x, z) = α · [a(α)·t(a(α)) + f(x + a(α), ẑ)] · (z'' + α)` where
    /// `ẑ` is `z` without its final m letters and `z''` those letters.
    pub fn g(&self, alpha: &Word, x: &Word, z: &Word) -> Result<Word> {
        self.check(z, self.decomp.l(), "z")?;
        let ax = self.a(alpha)?;
        let z_hat = z.prefix(self.head_len());
        let z_tail = z.suffix(self.decomp.m());
        let shift = ax.concat(&self.t(&ax)?);
        let middle = &shift ^ &self.f(&x.xor(&ax)?, &z_hat)?;
        Ok(Word::concat_all([alpha, &middle, &(&z_tail ^ alpha)]))
    }

    fn check(&self, w: &Word, len: usize, what: &str) -> Result<()> {
        if w.len() != len {
            return Err(Error::InvalidLayout(format!("{what} has length {}, expected {len}", w.len())));
        }
        Ok(())
    }
}

/// D, the removed words V, and the dominating set `D ∖ V` of Q_{m+θ+l}.
#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub decomposition: MDecomposition,
    pub e_size: usize,
    pub a_values: Vec<usize>,
    pub target_n: usize,
    pub d: VertexSet,
    pub v: VertexSet,
    pub result: VertexSet,
    pub predicted_d: u64,
    pub predicted_v: u64,
}

impl ConstructionResult {
    /// `key=value` lines describing the construction.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let d = &self.decomposition;
        let join = |v: &[usize]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        vec![
            ("target_n".into(), self.target_n.to_string()),
            ("l".into(), d.l().to_string()),
            ("m".into(), d.m().to_string()),
            ("theta".into(), d.theta().to_string()),
            ("S".into(), join(d.s())),
            ("sigma".into(), d.sigma().to_string()),
            ("a".into(), join(&self.a_values)),
            ("E_size".into(), self.e_size.to_string()),
            ("predicted_D".into(), self.predicted_d.to_string()),
            ("predicted_V".into(), self.predicted_v.to_string()),
            ("result_size".into(), self.result.len().to_string()),
        ]
    }
}

/// `D = g(Q_m, Q_θ, Δ)`, `V = { g(α, a(α), σ) : α ∈ Q_m, σ ∈ E }`.
///
/// Fails if the predicted sizes are not met, which would mean g is not
/// injective or V ⊄ D. Domination of the result is left to the caller.
pub fn build_construction(
    delta: &VertexSet,
    decomp: &MDecomposition,
    selection: &AdmissibleSelection,
) -> Result<ConstructionResult> {
    build_with(delta, decomp, selection, TailEncoding::DropFirst)
}

pub(crate) fn build_with(
    delta: &VertexSet,
    decomp: &MDecomposition,
    selection: &AdmissibleSelection,
    encoding: TailEncoding,
) -> Result<ConstructionResult> {
    if delta.dim() != decomp.l() {
        return Err(Error::DimensionMismatch { set: delta.dim(), requested: decomp.l() });
    }
    if !selection.e().is_subset(delta) {
        return Err(Error::NotAdmissible("E is not contained in delta".into()));
    }
    let maps = WedgeMaps::with_encoding(decomp, selection, encoding)?;
    let (m, theta) = (decomp.m(), decomp.theta());
    let predicted_d = (delta.len() as u64) << (m + theta);
    let predicted_v = (selection.e().len() as u64) << m;
    if predicted_d > MAX_MATERIALISED {
        return Err(Error::TooLarge(format!("D would have {predicted_d} members (limit {MAX_MATERIALISED})")));
    }

    let pairs: Vec<(u64, u64)> = (0..1u64 << m).flat_map(|a| (0..1u64 << theta).map(move |x| (a, x))).collect();
    let d_members = pairs
        .par_iter()
        .map(|&(a, x)| {
            let alpha = Word::from_index(m, a);
            let x = Word::from_index(theta, x);
            delta.iter().map(|z| maps.g(&alpha, &x, z)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let d = VertexSet::new(decomp.target_n(), d_members.into_iter().flatten())
        .map_err(|e| Error::Invariant(format!("g is not injective: {e}")))?;

    let mut v_members = Vec::with_capacity(predicted_v as usize);
    for a in 0..1u64 << m {
        let alpha = Word::from_index(m, a);
        let ax = maps.a(&alpha)?;
        for sigma in selection.e() {
            v_members.push(maps.g(&alpha, &ax, sigma)?);
        }
    }
    let v = VertexSet::new(decomp.target_n(), v_members)
        .map_err(|e| Error::Invariant(format!("g is not injective on V: {e}")))?;
    if !v.is_subset(&d) {
        return Err(Error::Invariant("V is not contained in D".into()));
    }
    let result = d.difference(&v)?;
    Ok(ConstructionResult {
        decomposition: decomp.clone(),
        e_size: selection.e().len(),
        a_values: maps.a_values().to_vec(),
        target_n: decomp.target_n(),
        d,
        v,
        result,
        predicted_d,
        predicted_v,
    })
}

/// The canonical instance for `n̂` and `m`: Δ the Hamming code of Q_{2^n̂−1}
/// and default block codes.
pub fn construct_canonical(nhat: usize, m: usize) -> Result<ConstructionResult> {
    let decomp = canonical_decomposition(nhat, m)?;
    construct(&decomp)
}

/// The construction for any decomposition of `l = 2^n̂ − 1`, with Δ the
/// Hamming code and default block codes.
pub fn construct(decomp: &MDecomposition) -> Result<ConstructionResult> {
    let l = decomp.l();
    if !(l + 1).is_power_of_two() || l < 3 {
        return Err(Error::OutOfRange(format!("l = {l} is not of the form 2^k - 1 with k >= 2")));
    }
    let nhat = l.trailing_ones() as usize;
    let code = crate::codes::hamming_graph_code_materialised(nhat)?;
    let selection = build_admissible(&code, decomp, &BTreeMap::new())?;
    build_construction(code.code().expect("materialised"), decomp, &selection)
}
