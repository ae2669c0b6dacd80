//! Code builders: the doubling construction for dominating sets, perfect
//! Hamming codes in graph form, and the recursive 3-separated codes.

use crate::bounds::lambda_lower;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;
use crate::word::Word;

/// `{ x · (x+σ) · π(x) : x ∈ Q_n, σ ∈ Δ } ⊂ Q_{2n+1}`.
///
/// If `delta` dominates Q_n the result dominates Q_{2n+1}, and it always has
/// `2^n·|Δ|` members.
pub fn double_dominating(delta: &VertexSet) -> VertexSet {
    let n = delta.dim();
    assert!(n <= 30, "doubling Q_{n} would need 2^{n} copies");
    let mut out = Vec::with_capacity(delta.len() << n);
    for xi in 0..1u64 << n {
        let x = Word::from_index(n, xi);
        let parity = Word::from_bits([x.parity()]);
        for sigma in delta {
            out.push(Word::concat_all([&x, &(&x ^ sigma), &parity]));
        }
    }
    // the map (x, σ) ↦ member is injective: x is the prefix, σ is recovered
    VertexSet::new(2 * n + 1, out).expect("doubling is injective")
}

/// Largest materialised graph code: 2^26 members of Q_31.
pub const MAX_MATERIALISED_NHAT: usize = 5;
/// Largest matrix-only graph code, on Q_127.
pub const MAX_MATRIX_NHAT: usize = 7;

/// A perfect code of Q_{2^k−1} in graph form: the first `free_len` letters
/// are free and the last `k` are `h` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCode {
    nhat: usize,
    free_len: usize,
    /// `k` rows of length `free_len`; determined letter `i` is the parity of
    /// row `i` against the free letters.
    h_rows: Vec<Word>,
    code: Option<VertexSet>,
}

impl GraphCode {
    pub fn nhat(&self) -> usize {
        self.nhat
    }

    /// Length `2^k − 1` of the codewords.
    pub fn dim(&self) -> usize {
        self.free_len + self.nhat
    }

    pub fn free_len(&self) -> usize {
        self.free_len
    }

    pub fn h_matrix(&self) -> &[Word] {
        &self.h_rows
    }

    /// The linear map `h : Q_free_len → Q_k`.
    pub fn h(&self, x: &Word) -> Word {
        assert_eq!(x.len(), self.free_len);
        Word::from_bits(self.h_rows.iter().map(|row| row.dot(x)))
    }

    /// `x · h(x)`.
    pub fn encode(&self, x: &Word) -> Word {
        x.concat(&self.h(x))
    }

    /// Whether `w` is a codeword, i.e. its last `k` letters are `h` of the rest.
    pub fn contains(&self, w: &Word) -> bool {
        w.len() == self.dim() && self.h(&w.prefix(self.free_len)) == w.suffix(self.nhat)
    }

    /// The materialised code, if it was built (k ≤ 5 and requested).
    pub fn code(&self) -> Option<&VertexSet> {
        self.code.as_ref()
    }

    /// Number of codewords, `2^free_len`, as an exponent.
    pub fn log2_len(&self) -> usize {
        self.free_len
    }

    fn materialise(&mut self) -> Result<()> {
        if self.nhat > MAX_MATERIALISED_NHAT {
            return Err(Error::TooLarge(format!(
                "materialising the Q_{} code needs 2^{} words",
                self.dim(),
                self.free_len
            )));
        }
        let members = (0..1u64 << self.free_len).map(|x| self.encode(&Word::from_index(self.free_len, x)));
        self.code = Some(VertexSet::new(self.dim(), members)?);
        Ok(())
    }
}

/// Systematic Hamming code of Q_{2^k−1}, materialised when `k ≤ 4`.
///
/// The parity-check columns are the numbers `1..2^k−1` written in `k` bits
/// (row 1 most significant). Non-powers of two come first in increasing
/// order and form `A`; the powers of two `2^{k−1}, …, 1` come last and form
/// the identity, so codewords are exactly `x · A x`.
pub fn hamming_graph_code(k: usize) -> Result<GraphCode> {
    let mut code = hamming_graph_code_matrix(k)?;
    if k <= 4 {
        code.materialise()?;
    }
    Ok(code)
}

/// Like [`hamming_graph_code`] but always materialised; refuses `k > 5`.
pub fn hamming_graph_code_materialised(k: usize) -> Result<GraphCode> {
    let mut code = hamming_graph_code_matrix(k)?;
    if code.code.is_none() {
        code.materialise()?;
    }
    Ok(code)
}

/// Matrix-only form for `2 ≤ k ≤ 7`.
pub fn hamming_graph_code_matrix(k: usize) -> Result<GraphCode> {
    if !(2..=MAX_MATRIX_NHAT).contains(&k) {
        return Err(Error::OutOfRange(format!("hamming_graph_code needs 2 <= k <= {MAX_MATRIX_NHAT}, got {k}")));
    }
    let columns: Vec<u64> = (1..1u64 << k).filter(|c| !c.is_power_of_two()).collect();
    let h_rows = (0..k)
        .map(|row| Word::from_bits(columns.iter().map(|c| c >> (k - 1 - row) & 1 == 1)))
        .collect();
    Ok(GraphCode { nhat: k, free_len: columns.len(), h_rows, code: None })
}

/// Perfect graph-form code of Q_{2^k−1} obtained by doubling `{0} ⊂ Q_1`
/// `k − 1` times.
///
/// Doubling a graph code `u·h(u)` of Q_n gives words
/// `x · (x + u·h(u)) · π(x)`; the free letters are `x` and the first
/// `|u|` letters of the middle block, which already sit at the front, so no
/// permutation is needed.
pub fn doubling_graph_code(k: usize) -> Result<GraphCode> {
    if !(2..=4).contains(&k) {
        return Err(Error::OutOfRange(format!("doubling_graph_code needs 2 <= k <= 4, got {k}")));
    }
    let mut delta = VertexSet::new(1, [Word::zeros(1)])?;
    for _ in 1..k {
        delta = double_dominating(&delta);
    }
    let dim = delta.dim();
    let free_len = dim - k;
    // h is linear; read its matrix off the images of unit vectors
    let mut by_free = std::collections::HashMap::new();
    for w in &delta {
        by_free.insert(w.prefix(free_len), w.suffix(k));
    }
    if by_free.len() != delta.len() || delta.len() != 1 << free_len {
        return Err(Error::Invariant("doubled code is not in graph form".into()));
    }
    let images: Vec<Word> = (1..=free_len)
        .map(|p| by_free[&Word::unit(free_len, p).unwrap()].clone())
        .collect();
    let h_rows = (1..=k).map(|row| Word::from_bits(images.iter().map(|im| im.get(row)))).collect();
    let code = GraphCode { nhat: k, free_len, h_rows, code: Some(delta) };
    if !code.code().unwrap().iter().all(|w| code.contains(w)) {
        return Err(Error::Invariant("doubled code is not linear".into()));
    }
    Ok(code)
}

/// Most members any [`separated_code`] call will produce.
pub const MAX_SEPARATED_CODE: u64 = 1 << 22;

/// A 3-separated subset of Q_s with `2^{s − ŝ − 1(š > 0)}` members.
///
/// For `s = 2^a − 1` this is the perfect code. Otherwise `s = p + q` with
/// `p = 2^ŝ − 1` and the code is `{ x · (x0^{p−q} + y) : y ∈ C_p, π(x) = 0 }`:
/// equal prefixes inherit the distance of `C_p`, distinct even prefixes
/// already differ in two letters and the tails differ in at least one more
/// unless `y = y'`, in which case the distance doubles.
pub fn separated_code(s: usize) -> Result<VertexSet> {
    if s == 0 {
        return Err(Error::OutOfRange("separated_code needs s >= 1".into()));
    }
    let size = lambda_lower(s);
    if size > MAX_SEPARATED_CODE {
        return Err(Error::TooLarge(format!("separated_code({s}) would have {size} members")));
    }
    let a = (usize::BITS - 1 - (s + 1).leading_zeros()) as usize;
    let p = (1usize << a) - 1;
    let q = s - p;
    let base = if a == 1 {
        VertexSet::new(1, [Word::zeros(1)])?
    } else {
        hamming_graph_code_materialised(a)?.code.expect("materialised")
    };
    if q == 0 {
        return Ok(base);
    }
    debug_assert!(q <= p);
    let mut out = Vec::with_capacity(size as usize);
    for xi in 0..1u64 << q {
        let x = Word::from_index(q, xi);
        if x.parity() {
            continue;
        }
        let padded = x.concat(&Word::zeros(p - q));
        for y in &base {
            out.push(x.concat(&(&padded ^ y)));
        }
    }
    VertexSet::new(s, out)
}
