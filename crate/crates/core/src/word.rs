//! Fixed-length binary words over F_2, the vertices of the hypercube Q_n.
//!
//! Positions are 1-based with position 1 the leftmost letter. Storage is
//! MSB-first inside 64-bit limbs, so for words of length at most 64 the
//! vertex index (position 1 is the most significant bit) is a single shift.

use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const LIMB: usize = 64;

type Limbs = SmallVec<[u64; 2]>;

/// A binary word of fixed length. The empty word has length 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: usize,
    limbs: Limbs,
}

#[inline]
fn limbs_for(len: usize) -> usize {
    len.div_ceil(LIMB)
}

impl Word {
    /// The empty word.
    pub fn empty() -> Self {
        Self::zeros(0)
    }

    pub fn zeros(len: usize) -> Self {
        let mut limbs = Limbs::new();
        limbs.resize(limbs_for(len), 0);
        Self { len, limbs }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        let mut done = 0;
        while done < len {
            let c = (len - done).min(LIMB);
            w.put_bits(done, c, u64::MAX >> (LIMB - c));
            done += c;
        }
        w
    }

    /// Builds a word from letters given leftmost first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut w = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                w.limbs[i / LIMB] |= 1u64 << (LIMB - 1 - i % LIMB);
            }
        }
        w
    }

    /// The word of length `len` whose vertex index is `index`.
    ///
    /// Panics if `len > 64` or `index` does not fit in `len` bits.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= LIMB, "vertex indices only address words up to 64 letters");
        assert!(len == LIMB || index >> len == 0, "index {index} too wide for length {len}");
        let mut w = Self::zeros(len);
        if len > 0 {
            w.put_bits(0, len, index);
        }
        w
    }

    /// Vertex index with position 1 as the most significant bit, for words of
    /// length at most 64.
    pub fn to_index(&self) -> Option<u64> {
        (self.len <= LIMB).then(|| self.bits_at(0, self.len))
    }

    /// `δ^p_q`: the weight-one word of length `p` with its 1 at position `q`.
    pub fn unit(p: usize, q: usize) -> Result<Self> {
        if q == 0 || q > p {
            return Err(Error::PositionOutOfRange { pos: q, len: p });
        }
        let mut w = Self::zeros(p);
        w.limbs[(q - 1) / LIMB] |= 1u64 << (LIMB - 1 - (q - 1) % LIMB);
        Ok(w)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at 1-based position `pos`.
    pub fn get(&self, pos: usize) -> bool {
        assert!(pos >= 1 && pos <= self.len, "position {pos} outside 1..={}", self.len);
        let i = pos - 1;
        (self.limbs[i / LIMB] >> (LIMB - 1 - i % LIMB)) & 1 == 1
    }

    /// A copy with the letter at 1-based `pos` flipped.
    pub fn flipped(&self, pos: usize) -> Self {
        assert!(pos >= 1 && pos <= self.len, "position {pos} outside 1..={}", self.len);
        let mut w = self.clone();
        let i = pos - 1;
        w.limbs[i / LIMB] ^= 1u64 << (LIMB - 1 - i % LIMB);
        w
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Sum of all letters in F_2.
    pub fn parity(&self) -> bool {
        self.limbs.iter().fold(0u32, |acc, l| acc ^ l.count_ones()) & 1 == 1
    }

    /// `Σ a_i b_i` in F_2; panics on a length mismatch.
    pub fn dot(&self, other: &Word) -> bool {
        assert_eq!(self.len, other.len, "dot product of words with different lengths");
        self.limbs.iter().zip(&other.limbs).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    /// Letter-wise addition in F_2.
    pub fn xor(&self, other: &Word) -> Result<Word> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok(self.xor_unchecked(other))
    }

    #[inline]
    fn xor_unchecked(&self, other: &Word) -> Word {
        let limbs = self.limbs.iter().zip(&other.limbs).map(|(a, b)| a ^ b).collect();
        Word { len: self.len, limbs }
    }

    pub fn hamming(&self, other: &Word) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok(self.distance(other))
    }

    /// Hamming distance; panics on a length mismatch.
    #[inline]
    pub fn distance(&self, other: &Word) -> usize {
        assert_eq!(self.len, other.len, "hamming distance between words of different lengths");
        self.limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Juxtaposition `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = Word::zeros(self.len + other.len);
        w.copy_from(0, self);
        w.copy_from(self.len, other);
        w
    }

    /// Concatenation of several words, left to right.
    pub fn concat_all<'a, I: IntoIterator<Item = &'a Word>>(parts: I) -> Word {
        let parts: SmallVec<[&Word; 6]> = parts.into_iter().collect();
        let mut w = Word::zeros(parts.iter().map(|p| p.len).sum());
        let mut at = 0;
        for p in parts {
            w.copy_from(at, p);
            at += p.len;
        }
        w
    }

    /// The subword of `len` letters starting at 1-based position `pos`.
    pub fn subword(&self, pos: usize, len: usize) -> Result<Word> {
        if pos == 0 || pos - 1 + len > self.len {
            return Err(Error::PositionOutOfRange { pos: pos + len.saturating_sub(1), len: self.len });
        }
        Ok(self.slice0(pos - 1, len))
    }

    /// A copy with the letters starting at 1-based `pos` replaced by `y`.
    pub fn replaced(&self, pos: usize, y: &Word) -> Result<Word> {
        if pos == 0 || pos - 1 + y.len > self.len {
            return Err(Error::PositionOutOfRange { pos: pos + y.len.saturating_sub(1), len: self.len });
        }
        let mut w = self.clone();
        w.copy_from(pos - 1, y);
        Ok(w)
    }

    /// The first `len` letters.
    pub fn prefix(&self, len: usize) -> Word {
        assert!(len <= self.len);
        self.slice0(0, len)
    }

    /// The last `len` letters.
    pub fn suffix(&self, len: usize) -> Word {
        assert!(len <= self.len);
        self.slice0(self.len - len, len)
    }

    /// Iterator over letters, leftmost first.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |p| self.get(p))
    }

    /// Words at distance exactly one, in order of the flipped position.
    pub fn neighbours(&self) -> impl Iterator<Item = Word> + '_ {
        (1..=self.len).map(move |p| self.flipped(p))
    }

    // ---- isometric embeddings ι^j_i ----

    /// `ι^j_i(y)`: `y·1·0…0` for `i ≥ 1`, `10…0` for `i = 0` and `0…0` for
    /// `i = -1`. The empty word stands in for `y` when `i ≤ 0`.
    pub fn iota_embed(j: usize, i: isize, y: &Word) -> Result<Word> {
        if i < -1 || i >= j as isize {
            return Err(Error::InvalidEmbedding(format!("ι^{j}_{i} needs -1 <= i < j")));
        }
        let expected = i.max(0) as usize;
        if y.len != expected {
            return Err(Error::InvalidEmbedding(format!(
                "ι^{j}_{i} takes a word of length {expected}, got {}",
                y.len
            )));
        }
        let mut w = Word::zeros(j);
        if i >= 0 {
            w.copy_from(0, y);
            let i = i as usize;
            w.limbs[i / LIMB] |= 1u64 << (LIMB - 1 - i % LIMB);
        }
        Ok(w)
    }

    /// Inverse of [`Word::iota_embed`]: `k` is the position of the last 1
    /// minus one (`-1` for the zero word) and `y` the letters before it.
    pub fn iota_decompose(&self) -> (isize, Word) {
        match self.last_one() {
            None => (-1, Word::empty()),
            Some(pos) => ((pos - 1) as isize, self.slice0(0, pos - 1)),
        }
    }

    /// 1-based position of the rightmost 1.
    pub fn last_one(&self) -> Option<usize> {
        for (li, &l) in self.limbs.iter().enumerate().rev() {
            if l != 0 {
                return Some(li * LIMB + (LIMB - l.trailing_zeros() as usize));
            }
        }
        None
    }

    // ---- raw bit plumbing (0-based offsets) ----

    /// `count ≤ 64` letters starting at 0-based `start`, right-aligned.
    #[inline]
    pub(crate) fn bits_at(&self, start: usize, count: usize) -> u64 {
        debug_assert!(count <= LIMB && start + count <= self.len);
        if count == 0 {
            return 0;
        }
        let li = start / LIMB;
        let off = start % LIMB;
        let mut v = self.limbs[li] << off;
        if off != 0 && li + 1 < self.limbs.len() {
            v |= self.limbs[li + 1] >> (LIMB - off);
        }
        v >> (LIMB - count)
    }

    #[inline]
    fn put_bits(&mut self, start: usize, count: usize, value: u64) {
        debug_assert!(count <= LIMB && start + count <= self.len);
        if count == 0 {
            return;
        }
        let v = value << (LIMB - count);
        let mask = u64::MAX << (LIMB - count);
        let li = start / LIMB;
        let off = start % LIMB;
        self.limbs[li] = (self.limbs[li] & !(mask >> off)) | (v >> off);
        if off != 0 && off + count > LIMB {
            let sh = LIMB - off;
            self.limbs[li + 1] = (self.limbs[li + 1] & !(mask << sh)) | (v << sh);
        }
    }

    fn copy_from(&mut self, start: usize, src: &Word) {
        let mut done = 0;
        while done < src.len {
            let c = (src.len - done).min(LIMB);
            self.put_bits(start + done, c, src.bits_at(done, c));
            done += c;
        }
    }

    pub(crate) fn slice0(&self, start: usize, len: usize) -> Word {
        let mut w = Word::zeros(len);
        let mut done = 0;
        while done < len {
            let c = (len - done).min(LIMB);
            w.put_bits(done, c, self.bits_at(start + done, c));
            done += c;
        }
        w
    }
}

impl BitXor<&Word> for &Word {
    type Output = Word;

    /// Panics on a length mismatch; use [`Word::xor`] for the checked form.
    fn bitxor(self, rhs: &Word) -> Word {
        assert_eq!(self.len, rhs.len, "xor of words with different lengths");
        self.xor_unchecked(rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("Word(∘)")
        } else {
            write!(f, "Word({self})")
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse(format!(
                        "invalid letter {other:?} at position {} of {s:?}",
                        i + 1
                    )))
                }
            }
        }
        Ok(Word::from_bits(bits))
    }
}

/// Blocks of the word splitting induced by an m-decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    /// The subword of length `s` for `s ∈ S`.
    S(usize),
    /// The (θ−1)-letter block following the s-blocks.
    Penultimate,
    /// The final m letters.
    Final,
    /// Everything except the final m letters.
    Head,
}

/// Block layout `s_1 … s_q | θ−1 | m` of a word of length `l`.
///
/// Projections accept words of length `l` and, for blocks inside the head,
/// words of length `l − m` as well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitLayout {
    l: usize,
    m: usize,
    theta: usize,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    sigma: usize,
}

impl SplitLayout {
    pub fn new(l: usize, m: usize, sizes: &[usize], theta: usize) -> Result<Self> {
        if theta == 0 {
            return Err(Error::InvalidLayout("theta must be positive".into()));
        }
        if sizes.first() == Some(&0) || sizes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidLayout(format!(
                "block sizes {sizes:?} must be positive and strictly increasing"
            )));
        }
        let sigma: usize = sizes.iter().sum();
        if sigma + theta - 1 + m != l {
            return Err(Error::InvalidLayout(format!(
                "sigma {sigma} + (theta-1) {} + m {m} != l {l}",
                theta - 1
            )));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut at = 0;
        for &s in sizes {
            offsets.push(at);
            at += s;
        }
        Ok(Self { l, m, theta, sizes: sizes.to_vec(), offsets, sigma })
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
    pub fn sigma(&self) -> usize {
        self.sigma
    }
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Block ids in left-to-right order for a word of length `l`.
    pub fn blocks(&self) -> Vec<Block> {
        let mut b: Vec<Block> = self.sizes.iter().map(|&s| Block::S(s)).collect();
        b.push(Block::Penultimate);
        b.push(Block::Final);
        b
    }

    /// 0-based start and length of a block.
    pub fn span(&self, block: Block) -> Result<(usize, usize)> {
        match block {
            Block::S(s) => self
                .sizes
                .iter()
                .position(|&x| x == s)
                .map(|i| (self.offsets[i], s))
                .ok_or(Error::UnknownBlock(format!("no block of size {s} in {:?}", self.sizes))),
            Block::Penultimate => Ok((self.sigma, self.theta - 1)),
            Block::Final => Ok((self.l - self.m, self.m)),
            Block::Head => Ok((0, self.l - self.m)),
        }
    }

    fn check_len(&self, w: &Word, block: Block) -> Result<()> {
        let head_only = matches!(block, Block::S(_) | Block::Penultimate);
        if w.len() == self.l || (head_only && w.len() == self.l - self.m) {
            Ok(())
        } else {
            Err(Error::LengthMismatch { left: w.len(), right: self.l })
        }
    }

    pub fn project(&self, w: &Word, block: Block) -> Result<Word> {
        self.check_len(w, block)?;
        let (start, len) = self.span(block)?;
        Ok(w.slice0(start, len))
    }

    pub fn replace(&self, w: &Word, block: Block, y: &Word) -> Result<Word> {
        self.check_len(w, block)?;
        let (start, len) = self.span(block)?;
        if y.len() != len {
            return Err(Error::LengthMismatch { left: y.len(), right: len });
        }
        let mut out = w.clone();
        out.copy_from(start, y);
        Ok(out)
    }

    /// `e_s`: places `y ∈ Q_s` in the s-block of an otherwise zero word of
    /// length `l − m`.
    pub fn embed_block(&self, s: usize, y: &Word) -> Result<Word> {
        self.replace(&Word::zeros(self.l - self.m), Block::S(s), y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn xor_and_hamming_examples() {
        assert_eq!(w("101").xor(&w("011")).unwrap(), w("110"));
        assert_eq!(w("101").hamming(&w("011")).unwrap(), 2);
        assert_eq!(w("0000").hamming(&w("1111")).unwrap(), 4);
        assert!(w("10").xor(&w("101")).is_err());
        assert!(w("10").hamming(&w("101")).is_err());
    }

    #[test]
    fn concat_and_units() {
        assert_eq!(w("10").concat(&w("01")), w("1001"));
        assert_eq!(Word::empty().concat(&w("110")), w("110"));
        assert_eq!(Word::unit(4, 2).unwrap(), w("0100"));
        assert_eq!(Word::unit(1, 1).unwrap(), w("1"));
        assert!(Word::unit(3, 0).is_err());
        assert!(Word::unit(3, 4).is_err());
    }

    #[test]
    fn iota_examples() {
        assert_eq!(Word::iota_embed(4, 2, &w("10")).unwrap(), w("1010"));
        assert_eq!(Word::iota_embed(3, -1, &Word::empty()).unwrap(), w("000"));
        assert_eq!(Word::iota_embed(3, 0, &Word::empty()).unwrap(), w("100"));
        assert!(Word::iota_embed(3, 3, &w("101")).is_err());
        assert!(Word::iota_embed(4, 2, &w("1")).is_err());
        assert_eq!(w("0000").iota_decompose(), (-1, Word::empty()));
        assert_eq!(w("1010").iota_decompose(), (2, w("10")));
        assert_eq!(w("1000").iota_decompose(), (0, Word::empty()));
    }

    #[test]
    fn parity_examples() {
        assert!(!w("101").parity());
        assert!(w("1").parity());
    }

    #[test]
    fn long_words_cross_limbs() {
        let a: Word = "1".repeat(70).parse().unwrap();
        let b = Word::unit(70, 65).unwrap();
        assert_eq!(a.distance(&b), 69);
        let c = a.concat(&b);
        assert_eq!(c.len(), 140);
        assert_eq!(c.subword(71, 70).unwrap(), b);
        assert_eq!(c.last_one(), Some(135));
        assert_eq!(Word::ones(130).weight(), 130);
        let (k, y) = b.iota_decompose();
        assert_eq!(k, 64);
        assert!(y.is_zero() && y.len() == 64);
    }

    #[test]
    fn index_is_msb_first() {
        assert_eq!(w("100").to_index(), Some(4));
        assert_eq!(w("001").to_index(), Some(1));
        assert_eq!(Word::from_index(3, 6), w("110"));
        assert_eq!(Word::empty().to_index(), Some(0));
    }

    #[test]
    fn layout_projection_examples() {
        let layout = SplitLayout::new(7, 0, &[1, 3], 4).unwrap();
        let x = w("1011010");
        assert_eq!(layout.project(&x, Block::S(3)).unwrap(), w("011"));
        assert_eq!(layout.project(&x, Block::S(1)).unwrap(), w("1"));
        assert_eq!(layout.project(&x, Block::Penultimate).unwrap(), w("010"));
        assert_eq!(layout.project(&x, Block::Final).unwrap(), Word::empty());
        assert_eq!(layout.replace(&x, Block::S(3), &w("000")).unwrap(), w("1000010"));
        assert!(layout.project(&x, Block::S(2)).is_err());
        assert!(layout.replace(&x, Block::S(3), &w("00")).is_err());
    }

    #[test]
    fn layout_accepts_head_length_words() {
        let layout = SplitLayout::new(15, 3, &[2, 5], 6).unwrap();
        let z: Word = "101100111010111".parse().unwrap();
        let head = layout.project(&z, Block::Head).unwrap();
        assert_eq!(head.len(), 12);
        assert_eq!(
            layout.project(&head, Block::S(5)).unwrap(),
            layout.project(&z, Block::S(5)).unwrap()
        );
        assert!(layout.project(&head, Block::Final).is_err());
        assert_eq!(layout.project(&z, Block::Final).unwrap(), w("111"));
    }

    #[test]
    fn layout_rejects_bad_sizes() {
        assert!(SplitLayout::new(7, 0, &[3, 1], 4).is_err());
        assert!(SplitLayout::new(7, 1, &[1, 3], 4).is_err());
    }
}
