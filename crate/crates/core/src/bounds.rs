//! Exact ledger of lower and upper bounds on the multiplicative gain χ_n.
//!
//! Every value is an exact rational ([`Chi`]); γ bounds are big integers.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::wedge::{canonical_decomposition, enumerate_decompositions, theta, MDecomposition};
use crate::Chi;

/// `n = 2^n̂ − 1 + ň` with `0 ≤ ň < 2^n̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DimSplit {
    pub n: usize,
    pub nhat: usize,
    pub ncheck: usize,
}

pub fn dim_split(n: usize) -> DimSplit {
    assert!(n >= 1, "dim_split needs n >= 1");
    let nhat = (usize::BITS - 1 - (n + 1).leading_zeros()) as usize;
    DimSplit { n, nhat, ncheck: n + 1 - (1 << nhat) }
}

/// Whether `target` lies in the domination wedge of `source`: some `l ≥ 0`
/// has `target̂ = sourcê + l` and `target̆ ≥ 2^l · sourcĕ`.
pub fn wedge_contains(source: usize, target: usize) -> bool {
    let (s, t) = (dim_split(source), dim_split(target));
    let Some(l) = t.nhat.checked_sub(s.nhat) else {
        return false;
    };
    (s.ncheck as u128) << l <= t.ncheck as u128
}

fn ratio(p: i64, q: i64) -> Chi {
    Chi::new(p.into(), q.into())
}

fn pow2(a: usize) -> BigInt {
    BigInt::one() << a
}

/// `1 − 2^n̂ / (n + 1(n odd))`.
pub fn chi_upper_classic(n: usize) -> Chi {
    let d = dim_split(n);
    let denom = n + (n % 2);
    Chi::one() - Chi::new(pow2(d.nhat), BigInt::from(denom))
}

/// The sharper upper bounds for `n ≡ 0 (mod 6)` and `n ≡ 5 (mod 6)`, `n ≥ 11`.
pub fn chi_upper_mod6(n: usize) -> Option<Chi> {
    let d = dim_split(n);
    let two_nhat = Chi::from_integer(pow2(d.nhat));
    let nn = Chi::from_integer(BigInt::from(n));
    match n % 6 {
        0 => {
            let two = Chi::from_integer(2.into());
            let lead = (&nn - &two) / (&nn - &two - &two / &nn);
            Some(Chi::one() - lead * two_nhat / nn)
        }
        5 if n >= 11 => {
            let pairs = BigInt::from(n * (n - 1) / 2);
            let denom = pairs * 5 - BigInt::from(n) + 2;
            let lead = Chi::one() + Chi::new(10.into(), denom);
            Some(Chi::one() - lead * two_nhat / (nn + Chi::one()))
        }
        _ => None,
    }
}

/// The smaller of the classical and mod-6 upper bounds.
pub fn chi_upper(n: usize) -> Chi {
    let classic = chi_upper_classic(n);
    match chi_upper_mod6(n) {
        Some(b) if b < classic => b,
        _ => classic,
    }
}

/// Exponent of [`lambda_lower`]: `s − ŝ − 1(š > 0)`.
pub fn lambda_lower_exp(s: usize) -> usize {
    let d = dim_split(s);
    s - d.nhat - usize::from(d.ncheck > 0)
}

/// `2^{s − ŝ − 1(š>0)}`, a lower bound on the largest 3-separated subset of
/// Q_s, with equality when `š = 0`.
pub fn lambda_lower(s: usize) -> u64 {
    let e = lambda_lower_exp(s);
    assert!(e < 64, "lambda_lower({s}) overflows u64; use lambda_lower_exp");
    1 << e
}

/// `lambda_lower` as a big integer, for any `s ≥ 1`.
pub fn lambda_lower_big(s: usize) -> BigUint {
    BigUint::one() << lambda_lower_exp(s)
}

/// Dimension reached by a decomposition of `2^n̂ − 1`, when the product
/// bound applies there: the hypothesis `m < θ − |S|` holds and the target
/// stays in the same n̂ band.
pub fn chimain_target(decomp: &MDecomposition) -> Option<usize> {
    let l = decomp.l();
    if !(l + 1).is_power_of_two() || l < 3 || !decomp.satisfies_theorem() {
        return None;
    }
    let nhat = (l + 1).trailing_zeros() as usize;
    (decomp.theta() + decomp.m() < 1 << nhat).then(|| decomp.target_n())
}

/// `2^{m − 2^n̂} · ∏_{s∈S} λ(s)` with `λ` supplied by the caller.
pub fn chimain_bound(decomp: &MDecomposition, lambda_fn: impl Fn(usize) -> BigUint) -> Result<Chi> {
    if chimain_target(decomp).is_none() {
        return Err(Error::OutOfRange(format!(
            "product bound does not apply to l = {}, m = {}, S = {:?}",
            decomp.l(),
            decomp.m(),
            decomp.s()
        )));
    }
    let prod: BigUint = decomp.s().iter().map(|&s| lambda_fn(s)).product();
    let numer = BigInt::from(prod) << decomp.m();
    Ok(Chi::new(numer, pow2(decomp.l() + 1)))
}

/// [`chimain_bound`] with [`lambda_lower_big`].
pub fn chimain_lower(decomp: &MDecomposition) -> Result<Chi> {
    chimain_bound(decomp, lambda_lower_big)
}

/// A cited lower bound on χ_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub n: usize,
    pub chi: Chi,
    pub sharp: bool,
    /// Citation label; `-` when none is shown.
    pub cite: String,
}

/// The bundled seed file.
pub const DEFAULT_SEEDS: &str = include_str!("../data/seeds.txt");

/// The bundled reference grid, typos included.
pub const REFERENCE_GRID: &str = include_str!("../data/reference_grid.txt");

/// Parses `n=<int> chi=<p>/<q> sharp=<0|1> cite=<label>` lines; `#` starts
/// a comment.
pub fn parse_seeds(text: &str) -> Result<Vec<Seed>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("seed line {}: {what}: {raw:?}", lineno + 1));
        let mut fields = BTreeMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            if fields.insert(k, v).is_some() {
                return Err(bad("repeated key"));
            }
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(&format!("missing {k}")));
        let n: usize = get("n")?.parse().map_err(|_| bad("bad n"))?;
        let chi = parse_chi(get("chi")?).ok_or_else(|| bad("bad chi"))?;
        let sharp = match get("sharp")? {
            "0" => false,
            "1" => true,
            _ => return Err(bad("sharp must be 0 or 1")),
        };
        let cite = get("cite")?.to_string();
        if n == 0 || chi.is_negative() || chi >= ratio(1, 2) {
            return Err(bad("need n >= 1 and 0 <= chi < 1/2"));
        }
        out.push(Seed { n, chi, sharp, cite });
    }
    Ok(out)
}

/// Parses `0`, `p/q` or `2^-a`.
pub fn parse_chi(s: &str) -> Option<Chi> {
    if let Some(a) = s.strip_prefix("2^-") {
        return Some(Chi::new(BigInt::one(), pow2(a.parse().ok()?)));
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Chi::new(p.parse().ok()?, q))
        }
        None => Some(Chi::from_integer(s.parse().ok()?)),
    }
}

/// Where a lower bound comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `ň ∈ {0, 1}`: χ = 0 exactly.
    ExactFamily,
    Seed(String),
    /// Inherited from the wedge vertex `p`.
    Wedge(usize),
    Chimain { nhat: usize, m: usize, s: Vec<usize> },
    Zero,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::ExactFamily => f.write_str("exact"),
            Provenance::Seed(c) => write!(f, "seed:{c}"),
            Provenance::Wedge(p) => write!(f, "wedge:{p}"),
            Provenance::Chimain { nhat, m, s } => {
                let s: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "product:nhat={nhat}:m={m}:S={}", s.join(" "))
            }
            Provenance::Zero => f.write_str("none"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub split: DimSplit,
    pub chi_lower: Chi,
    pub chi_upper: Chi,
    pub provenance: Provenance,
    /// `⌊(1 − χ_lower) · 2^{n−n̂}⌋`.
    pub gamma_upper: BigInt,
    pub sharp: bool,
}

impl BoundEntry {
    pub fn n(&self) -> usize {
        self.split.n
    }
}

fn gamma_from_chi(split: DimSplit, chi: &Chi) -> BigInt {
    ((Chi::one() - chi) * Chi::from_integer(pow2(split.n - split.nhat))).floor().to_integer()
}

/// Upper bound on γ_n implied by a lower bound on χ_n.
pub fn gamma_upper(n: usize, chi: &Chi) -> BigInt {
    gamma_from_chi(dim_split(n), chi)
}

#[derive(Clone, Debug, Default)]
pub struct LedgerOptions {
    /// Also try every decomposition, not just the canonical ones.
    pub sweep_decompositions: bool,
    /// Replaces the bundled seeds when set.
    pub seeds: Option<Vec<Seed>>,
}

/// Largest `n` the ledger covers.
pub const MAX_LEDGER_N: usize = 1023;

/// Best product-bound value at each target `n ≤ max_n`.
pub fn chimain_table(max_n: usize, sweep: bool) -> BTreeMap<usize, (Chi, MDecomposition)> {
    let mut best: BTreeMap<usize, (Chi, MDecomposition)> = BTreeMap::new();
    let mut offer = |d: MDecomposition| {
        let Some(n) = chimain_target(&d).filter(|&n| n <= max_n) else {
            return;
        };
        let chi = chimain_lower(&d).expect("target checked");
        if best.get(&n).is_none_or(|(c, _)| chi > *c) {
            best.insert(n, (chi, d));
        }
    };
    for nhat in 3.. {
        let l = (1usize << nhat) - 1;
        let th = theta(l as u64 + 1).theta as usize;
        if l + th > max_n {
            break;
        }
        let mut m = 0;
        while let Ok(d) = canonical_decomposition(nhat, m) {
            offer(d);
            m += 1;
        }
        if sweep {
            for m in 0..th {
                enumerate_decompositions(l, m).into_iter().for_each(&mut offer);
            }
        }
    }
    best
}

/// The ledger for `1 ≤ n ≤ max_n`: the best direct bound at each n (exact
/// family, seed, product bound), then the maximum over all wedge vertices.
/// Ties keep the direct source, then the smallest vertex.
pub fn best_bounds(max_n: usize, opts: &LedgerOptions) -> Result<Vec<BoundEntry>> {
    if max_n > MAX_LEDGER_N {
        return Err(Error::OutOfRange(format!("ledger covers n <= {MAX_LEDGER_N}, got {max_n}")));
    }
    let seeds = match &opts.seeds {
        Some(s) => s.clone(),
        None => parse_seeds(DEFAULT_SEEDS)?,
    };
    let products = chimain_table(max_n, opts.sweep_decompositions);

    // direct[n] = (chi, provenance, sharp)
    let mut direct: Vec<(Chi, Provenance, bool)> = vec![(Chi::zero(), Provenance::Zero, false); max_n + 1];
    for (n, slot) in direct.iter_mut().enumerate().skip(1) {
        let d = dim_split(n);
        if d.ncheck <= 1 {
            *slot = (Chi::zero(), Provenance::ExactFamily, true);
            continue;
        }
        for seed in seeds.iter().filter(|s| s.n == n) {
            if seed.chi > slot.0 || matches!(slot.1, Provenance::Zero) {
                *slot = (seed.chi.clone(), Provenance::Seed(seed.cite.clone()), seed.sharp);
            }
        }
        if let Some((chi, dec)) = products.get(&n) {
            if *chi > slot.0 {
                let prov = Provenance::Chimain { nhat: d.nhat, m: dec.m(), s: dec.s().to_vec() };
                *slot = (chi.clone(), prov, false);
            }
        }
    }

    let mut out = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let (mut chi, mut prov, mut sharp) = direct[n].clone();
        for (p, (c, _, _)) in direct.iter().enumerate().take(n).skip(1) {
            if *c > chi && wedge_contains(p, n) {
                (chi, prov, sharp) = (c.clone(), Provenance::Wedge(p), false);
            }
        }
        let split = dim_split(n);
        let chi_upper = chi_upper(n);
        if chi > chi_upper {
            return Err(Error::Invariant(format!("chi_{n}: lower {chi} exceeds upper {chi_upper}")));
        }
        let gamma_upper = gamma_from_chi(split, &chi);
        out.push(BoundEntry { split, chi_lower: chi, chi_upper, provenance: prov, gamma_upper, sharp });
    }
    Ok(out)
}

/// Output of the `γ_{γ_n − 1} ≤ γ_n · 2^{γ_n − n − 1}` rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfRule {
    pub source: usize,
    pub target: usize,
    pub gamma_bound: BigInt,
    /// `1 − gamma_bound · 2^{n̂ − target}`; may be negative, i.e. useless.
    pub chi: Chi,
}

/// Exact γ values this ledger accepts for the self rule.
pub const KNOWN_GAMMA: [(usize, u64); 3] = [(5, 7), (6, 12), (9, 62)];

pub fn rule_gamma_self(n: usize, gamma_n: u64) -> Result<SelfRule> {
    if !KNOWN_GAMMA.contains(&(n, gamma_n)) {
        return Err(Error::OutOfRange(format!("gamma_{n} = {gamma_n} is not a known exact value")));
    }
    let gamma = gamma_n as usize;
    let target = gamma - 1;
    let gamma_bound = BigInt::from(gamma_n) << (gamma - n - 1);
    let d = dim_split(target);
    let chi = Chi::one() - Chi::new(gamma_bound.clone(), pow2(target - d.nhat));
    Ok(SelfRule { source: n, target, gamma_bound, chi })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiStyle {
    /// `2^-a` only for unit fractions with `a ≥ 6`, like the printed tables.
    Table,
    /// `2^-a` for every unit fraction.
    Csv,
}

/// Renders χ as `0`, `p/q` or `2^-a`.
pub fn format_chi(chi: &Chi, style: ChiStyle) -> String {
    if chi.is_zero() {
        return "0".into();
    }
    let denom = chi.denom();
    if chi.numer().is_one() && denom.is_positive() && (denom & (denom - 1u32)).is_zero() {
        let a = denom.bits() - 1;
        if style == ChiStyle::Csv || a >= 6 {
            return format!("2^-{a}");
        }
    }
    format!("{}/{}", chi.numer(), chi.denom())
}

/// Renders a positive integer as `2^a`, `2^a - 2^b`, or in decimal.
pub fn format_gamma(g: &BigInt) -> String {
    let pow = |x: &BigInt| -> Option<u64> {
        (x.is_positive() && (x & (x - 1u32)).is_zero()).then(|| x.bits() - 1)
    };
    if let Some(a) = pow(g) {
        return format!("2^{a}");
    }
    if g.is_positive() {
        let b = g.trailing_zeros().unwrap_or(0);
        if let Some(a) = pow(&(g + (BigInt::one() << b))) {
            return format!("2^{a} - 2^{b}");
        }
    }
    g.to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Figure1,
    Grid,
    Csv,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "figure1" => Ok(Self::Figure1),
            "grid" => Ok(Self::Grid),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::Parse(format!("unknown table format {s:?}"))),
        }
    }
}

pub fn render_table(entries: &[BoundEntry], format: TableFormat) -> String {
    match format {
        TableFormat::Figure1 => render_figure1(entries),
        TableFormat::Grid => render_grid(entries, Some(REFERENCE_GRID)),
        TableFormat::Csv => render_csv(entries),
    }
}

/// One line per `2 ≤ n ≤ 33`: `n` (starred when sharp), χ and the note —
/// citation, wedge vertex, or `?` for an unproven zero.
pub fn render_figure1(entries: &[BoundEntry]) -> String {
    let mut out = String::from("n    chi       note\n");
    for e in entries.iter().filter(|e| (2..=33).contains(&e.n())) {
        let n = format!("{}{}", e.n(), if e.sharp { "*" } else { "" });
        let note = match &e.provenance {
            Provenance::Seed(c) if c != "-" => c.clone(),
            Provenance::Wedge(p) => p.to_string(),
            _ if e.chi_lower.is_zero() && !e.sharp => "?".into(),
            _ => String::new(),
        };
        let line = format!("{n:<4} {:<9} {note}", format_chi(&e.chi_lower, ChiStyle::Table));
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// `n,nhat,ncheck,chi_lower,chi_upper,gamma_upper,provenance`.
pub fn render_csv(entries: &[BoundEntry]) -> String {
    let mut out = String::from("n,nhat,ncheck,chi_lower,chi_upper,gamma_upper,provenance\n");
    for e in entries {
        let prov = if e.sharp { format!("{}:sharp", e.provenance) } else { e.provenance.to_string() };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            e.n(),
            e.split.nhat,
            e.split.ncheck,
            format_chi(&e.chi_lower, ChiStyle::Csv),
            format_chi(&e.chi_upper, ChiStyle::Csv),
            format_gamma(&e.gamma_upper),
            prov
        )
        .unwrap();
    }
    out
}

/// A grid cell: `None` is `ň ≥ 2^n̂` (rendered `x`).
pub type GridCell = Option<Chi>;

/// Parses a grid file: `<lo>[-<hi>]: <cell> <cell> …` per line, cells for
/// n̂ = 1, 2, …; returns `(ň, n̂) → cell`.
pub fn parse_grid(text: &str) -> Result<BTreeMap<(usize, usize), GridCell>> {
    let mut out = BTreeMap::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("grid line {raw:?}"));
        let (range, cells) = line.split_once(':').ok_or_else(bad)?;
        let (lo, hi) = match range.trim().split_once('-') {
            Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
            None => {
                let v: usize = range.trim().parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        let cells: Vec<GridCell> = cells
            .split_whitespace()
            .map(|c| if c == "x" { Ok(None) } else { parse_chi(c).map(Some).ok_or_else(bad) })
            .collect::<Result<_>>()?;
        for ncheck in lo..=hi {
            for (i, c) in cells.iter().enumerate() {
                out.insert((ncheck, i + 1), c.clone());
            }
        }
    }
    Ok(out)
}

/// Cells of the ledger arranged by `(ň, n̂)` for every n̂ band fully
/// inside `entries`.
pub fn ledger_grid(entries: &[BoundEntry]) -> (usize, BTreeMap<(usize, usize), GridCell>) {
    let by_n: BTreeMap<usize, &BoundEntry> = entries.iter().map(|e| (e.n(), e)).collect();
    let mut max_nhat = 0;
    while by_n.contains_key(&((1usize << (max_nhat + 2)) - 2)) {
        max_nhat += 1;
    }
    let mut cells = BTreeMap::new();
    for nhat in 1..=max_nhat {
        for ncheck in 0..1usize << max_nhat {
            let cell = (ncheck < 1 << nhat).then(|| by_n[&((1 << nhat) - 1 + ncheck)].chi_lower.clone());
            cells.insert((ncheck, nhat), cell);
        }
    }
    (max_nhat, cells)
}

/// Grid by n̂ column and ň row, merging consecutive identical rows. With a
/// reference grid, every differing cell is listed after the table.
pub fn render_grid(entries: &[BoundEntry], reference: Option<&str>) -> String {
    let (max_nhat, cells) = ledger_grid(entries);
    let cell_text = |c: &GridCell| match c {
        None => "x".to_string(),
        Some(chi) => format_chi(chi, ChiStyle::Table),
    };
    let row = |ncheck: usize| -> Vec<String> { (1..=max_nhat).map(|h| cell_text(&cells[&(ncheck, h)])).collect() };

    let mut out = String::new();
    let header: Vec<String> = (1..=max_nhat).map(|h| format!("{h:>9}")).collect();
    writeln!(out, "{:>8} |{}", "ncheck", header.concat()).unwrap();
    let rows = 1usize << max_nhat;
    let mut start = 0;
    while start < rows {
        let cur = row(start);
        let mut end = start;
        while end + 1 < rows && row(end + 1) == cur {
            end += 1;
        }
        let label = if end == start { start.to_string() } else { format!("{start}-{end}") };
        let body: Vec<String> = cur.iter().map(|c| format!("{c:>9}")).collect();
        writeln!(out, "{label:>8} |{}", body.concat()).unwrap();
        start = end + 1;
    }

    if let Some(text) = reference {
        match parse_grid(text) {
            Ok(reference) => {
                for line in grid_discrepancies(&cells, &reference) {
                    writeln!(out, "# {line}").unwrap();
                }
            }
            Err(e) => writeln!(out, "# reference grid unreadable: {e}").unwrap(),
        }
    }
    out
}

/// Human-readable differences between computed and reference cells.
pub fn grid_discrepancies(
    cells: &BTreeMap<(usize, usize), GridCell>,
    reference: &BTreeMap<(usize, usize), GridCell>,
) -> Vec<String> {
    let show = |c: &GridCell| c.as_ref().map_or("x".into(), |v| format_chi(v, ChiStyle::Table));
    let mut diffs = Vec::new();
    let mut missing = Vec::new();
    for (&(ncheck, nhat), c) in cells {
        match reference.get(&(ncheck, nhat)) {
            None if nhat == 1 => missing.push(ncheck),
            Some(r) if r != c => {
                let n = (1usize << nhat) - 1 + ncheck;
                diffs.push((
                    n,
                    format!(
                        "reference differs at n={n} (nhat={nhat} ncheck={ncheck}): computed {}, reference {}",
                        show(c),
                        show(r)
                    ),
                ));
            }
            _ => {}
        }
    }
    diffs.sort();
    let mut out: Vec<String> = diffs.into_iter().map(|(_, s)| s).collect();
    for run in runs(&missing) {
        out.push(format!("reference has no row for ncheck={run}"));
    }
    out
}

fn runs(xs: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[j] + 1 {
            j += 1;
        }
        out.push(if i == j { xs[i].to_string() } else { format!("{}-{}", xs[i], xs[j]) });
        i = j + 1;
    }
    out
}

/// `χ` as an `f64`, for display only.
pub fn chi_to_f64(chi: &Chi) -> f64 {
    chi.to_f64().unwrap_or(f64::NAN)
}

/// `gcd`-free check that `χ · 2^{n−n̂}` is an integer.
pub fn gamma_is_exact(n: usize, chi: &Chi) -> bool {
    let d = dim_split(n);
    pow2(d.n - d.nhat).is_multiple_of(chi.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Chi {
        ratio(p, d)
    }

    fn two_pow_neg(a: usize) -> Chi {
        Chi::new(BigInt::one(), pow2(a))
    }

    #[test]
    fn dim_split_examples() {
        assert_eq!(dim_split(9), DimSplit { n: 9, nhat: 3, ncheck: 2 });
        assert_eq!(dim_split(7), DimSplit { n: 7, nhat: 3, ncheck: 0 });
        assert_eq!(dim_split(278), DimSplit { n: 278, nhat: 8, ncheck: 23 });
        assert_eq!(dim_split(1), DimSplit { n: 1, nhat: 1, ncheck: 0 });
    }

    #[test]
    fn dim_split_invariant() {
        for n in 1..5000 {
            let d = dim_split(n);
            assert_eq!((1 << d.nhat) - 1 + d.ncheck, n);
            assert!(d.ncheck < 1 << d.nhat);
        }
    }

    #[test]
    fn wedge_examples() {
        assert!(wedge_contains(9, 19));
        assert!(wedge_contains(74, 149));
        assert!(wedge_contains(9, 79));
        assert!(!wedge_contains(9, 18));
        assert!(!wedge_contains(19, 9));
        for n in 1..300 {
            assert!(wedge_contains(n, n));
        }
    }

    /// Wedge membership by iterating the one-step map `n ↦ {2n+1, 2n+2, …}`
    /// together with `n ↦ n+1` within a band.
    #[test]
    fn wedge_matches_reachability() {
        let max = 300;
        for s in 1..=max {
            let mut reach = vec![false; max + 1];
            reach[s] = true;
            for n in s..=max {
                if !reach[n] {
                    continue;
                }
                if n < max && dim_split(n + 1).nhat == dim_split(n).nhat {
                    reach[n + 1] = true;
                }
                if 2 * n < max {
                    reach[2 * n + 1] = true;
                }
            }
            for (n, &r) in reach.iter().enumerate().skip(1) {
                assert_eq!(wedge_contains(s, n), r, "{s} -> {n}");
            }
        }
    }

    #[test]
    fn classic_upper_examples() {
        assert_eq!(chi_upper_classic(7), Chi::zero());
        assert_eq!(chi_upper_classic(9), q(1, 5));
        assert_eq!(chi_upper_classic(6), q(1, 3));
    }

    #[test]
    fn mod6_upper_examples() {
        assert_eq!(chi_upper_mod6(6), Some(q(3, 11)));
        assert_eq!(chi_upper_mod6(7), None);
        assert_eq!(chi_upper_mod6(5), None);
        // n = 11: 1 − (1 + 10/266)·(8/12) = 1 − (276/266)(2/3) = 1 − 92/133
        assert_eq!(chi_upper_mod6(11), Some(q(41, 133)));
        // n = 12: 1 − (10/(10 − 1/6))·(8/12) = 1 − 40/59
        assert_eq!(chi_upper_mod6(12), Some(q(19, 59)));
    }

    #[test]
    fn lambda_lower_examples() {
        assert_eq!(lambda_lower(7), 16);
        assert_eq!(lambda_lower(5), 4);
        assert_eq!(lambda_lower(2), 1);
        assert_eq!(lambda_lower(1), 1);
        assert_eq!(lambda_lower(8), 16);
        assert_eq!(lambda_lower_big(100), BigUint::one() << 93);
    }

    #[test]
    fn chimain_examples() {
        let d = MDecomposition::new(7, 0, vec![1, 3]).unwrap();
        assert_eq!(chimain_lower(&d).unwrap(), two_pow_neg(7));
        let d = MDecomposition::new(63, 0, vec![1, 3, 4, 5, 6, 7, 8, 9, 10]).unwrap();
        assert_eq!(chimain_lower(&d).unwrap(), two_pow_neg(38));
        let s: Vec<usize> = std::iter::once(1).chain(7..=22).collect();
        let d = MDecomposition::new(255, 0, s).unwrap();
        assert_eq!(chimain_lower(&d).unwrap(), two_pow_neg(94));
        assert_eq!(chimain_target(&d), Some(278));
    }

    #[test]
    fn chimain_uses_supplied_lambda() {
        let d = MDecomposition::new(7, 1, vec![3]).unwrap();
        assert_eq!(chimain_bound(&d, |_| BigUint::from(2u32)).unwrap(), two_pow_neg(6));
        assert_eq!(chimain_bound(&d, |_| BigUint::from(4u32)).unwrap(), two_pow_neg(5));
    }

    #[test]
    fn seeds_parse() {
        let seeds = parse_seeds(DEFAULT_SEEDS).unwrap();
        let nine = seeds.iter().find(|s| s.n == 9).unwrap();
        assert_eq!((nine.chi.clone(), nine.sharp), (q(1, 32), true));
        let thirteen = seeds.iter().find(|s| s.n == 13).unwrap();
        assert!(!thirteen.sharp);
        assert_eq!(seeds.iter().find(|s| s.n == 56).unwrap().chi, q(711, 2048));
        assert!(parse_seeds("n=5 chi=1/8 sharp=2 cite=x").is_err());
        assert!(parse_seeds("n=5 chi=3/4 sharp=0 cite=x").is_err());
        assert!(parse_seeds("n=5 chi=1/8 cite=x").is_err());
    }

    #[test]
    fn self_rule() {
        let r = rule_gamma_self(9, 62).unwrap();
        assert_eq!((r.target, r.gamma_bound.clone()), (61, BigInt::from(62) << 52));
        assert!(r.chi.is_negative());
        assert_eq!(rule_gamma_self(5, 7).unwrap().gamma_bound, BigInt::from(14));
        assert_eq!(rule_gamma_self(6, 12).unwrap().gamma_bound, BigInt::from(384));
        assert!(rule_gamma_self(10, 120).is_err());
    }

    #[test]
    fn ledger_examples() {
        let e = best_bounds(160, &LedgerOptions::default()).unwrap();
        let at = |n: usize| &e[n - 1];
        assert_eq!(at(19).chi_lower, q(1, 32));
        assert_eq!(at(19).provenance, Provenance::Wedge(9));
        assert_eq!(at(75).chi_lower, two_pow_neg(37));
        assert!(matches!(at(75).provenance, Provenance::Chimain { nhat: 6, m: 1, .. }));
        assert_eq!(at(151).chi_lower, two_pow_neg(37));
        assert_eq!(at(151).provenance, Provenance::Wedge(75));
        assert_eq!(at(7).provenance, Provenance::ExactFamily);
        assert!(at(7).sharp);
    }

    #[test]
    fn ledger_invariants() {
        let e = best_bounds(MAX_LEDGER_N, &LedgerOptions::default()).unwrap();
        for x in &e {
            assert!(!x.chi_lower.is_negative() && x.chi_lower <= x.chi_upper && x.chi_upper < q(1, 2));
            assert!(gamma_is_exact(x.n(), &x.chi_lower), "n = {}", x.n());
            let back = Chi::from_integer(x.gamma_upper.clone()) / Chi::from_integer(pow2(x.n() - x.split.nhat));
            assert_eq!(back + &x.chi_lower, Chi::one());
            if x.split.ncheck <= 1 {
                assert!(x.chi_lower.is_zero() && x.chi_upper.is_zero());
            }
        }
        assert!(best_bounds(1024, &LedgerOptions::default()).is_err());
    }

    #[test]
    fn sweep_never_worse() {
        let canon = best_bounds(600, &LedgerOptions::default()).unwrap();
        let sweep = best_bounds(600, &LedgerOptions { sweep_decompositions: true, ..Default::default() }).unwrap();
        for (a, b) in canon.iter().zip(&sweep) {
            assert!(b.chi_lower >= a.chi_lower);
        }
    }

    #[test]
    fn formats() {
        assert_eq!(format_chi(&q(1, 32), ChiStyle::Table), "1/32");
        assert_eq!(format_chi(&q(1, 32), ChiStyle::Csv), "2^-5");
        assert_eq!(format_chi(&two_pow_neg(38), ChiStyle::Table), "2^-38");
        assert_eq!(format_chi(&q(33, 128), ChiStyle::Table), "33/128");
        assert_eq!(format_gamma(&(pow2(255) - pow2(161))), "2^255 - 2^161");
        assert_eq!(format_gamma(&pow2(10)), "2^10");
        assert_eq!(format_gamma(&BigInt::from(95)), "95");
        assert_eq!(parse_chi("2^-7"), Some(two_pow_neg(7)));
        assert_eq!(parse_chi("1/0"), None);
    }

    #[test]
    fn grid_parse_expands_ranges() {
        let g = parse_grid(REFERENCE_GRID).unwrap();
        assert_eq!(g[&(7, 4)], Some(q(1, 16)));
        assert_eq!(g[&(2, 1)], None);
        assert!(!g.contains_key(&(190, 8)));
    }
}
