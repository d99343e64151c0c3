//! Linear codes over GF(2) with precomputed coset-leader tables.
//!
//! A code is described by its parity-check matrix. Construction walks the
//! weight shells of the ambient space in ascending order and records, for
//! every syndrome, the first vector that produces it. Within a shell the
//! masks are visited in ascending numeric order, which equals lexicographic
//! order of the bit strings, so each stored leader is the minimum-weight
//! vector of its coset and the lexicographically smallest among those.
//! The heaviest leader weight is the covering radius.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix};

/// A linear code `(n, k)` together with its full coset-leader table.
#[derive(Clone, Debug)]
pub struct LinearCode {
    id: String,
    n: usize,
    k: usize,
    h: Gf2Matrix,
    leaders: Vec<u64>,
    covering_radius: usize,
}

/// Default cap on leader-table size, in bits of stored leader vectors.
pub const DEFAULT_TABLE_CAP_BITS: u64 = 1 << 28;

/// Next mask with the same popcount in ascending numeric order, if any fits
/// in 64 bits.
fn next_same_weight(v: u64) -> Option<u64> {
    let low = v & v.wrapping_neg();
    let carry = (v as u128) + (low as u128);
    if carry > u64::MAX as u128 {
        return None;
    }
    let carry = carry as u64;
    Some(carry | ((v ^ carry) / low) >> 2)
}

impl LinearCode {
    /// Builds the code from a full-row-rank parity-check matrix using the
    /// default table cap.
    pub fn from_parity_check(h: Gf2Matrix) -> Result<Self> {
        Self::from_parity_check_with_cap(h, DEFAULT_TABLE_CAP_BITS)
    }

    /// Builds the code from a parity-check matrix, refusing to allocate a
    /// leader table larger than `cap_bits` bits.
    pub fn from_parity_check_with_cap(h: Gf2Matrix, cap_bits: u64) -> Result<Self> {
        let n = h.cols();
        let m = h.rows();
        if m >= n {
            return Err(Error::Config(format!(
                "parity check has {m} rows but only {n} columns; need k >= 1"
            )));
        }
        let rank = h.rank();
        if rank != m {
            return Err(Error::RankDeficient { rank, rows: m });
        }
        let required = (1u128 << m) * n as u128;
        if required > cap_bits as u128 {
            return Err(Error::BudgetExceeded {
                required,
                cap: cap_bits,
            });
        }

        // Syndrome of the unit vector whose set bit sits at word position p.
        let mut unit_syndrome = vec![0u64; n];
        for (p, slot) in unit_syndrome.iter_mut().enumerate() {
            let e = BitVector::from_word(1u64 << p, n)?;
            *slot = h.mul_vector(&e)?.word();
        }

        let size = 1usize << m;
        let mut leaders = vec![u64::MAX; size];
        let mut filled = 0usize;
        let mut covering_radius = 0usize;

        'shells: for w in 0..=n {
            let mut mask = if w == 0 { 0 } else { (1u64 << w) - 1 };
            loop {
                if n < 64 && mask >= 1u64 << n {
                    break;
                }
                let mut syndrome = 0u64;
                let mut rest = mask;
                while rest != 0 {
                    syndrome ^= unit_syndrome[rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
                if leaders[syndrome as usize] == u64::MAX {
                    leaders[syndrome as usize] = mask;
                    covering_radius = w;
                    filled += 1;
                    if filled == size {
                        break 'shells;
                    }
                }
                if w == 0 {
                    break;
                }
                match next_same_weight(mask) {
                    Some(next) => mask = next,
                    None => break,
                }
            }
        }
        assert_eq!(filled, size, "full-rank parity check must cover all syndromes");

        Ok(LinearCode {
            id: format!("({n},{})", n - m),
            n,
            k: n - m,
            h,
            leaders,
            covering_radius,
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity bits, `n - k`.
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn covering_radius(&self) -> usize {
        self.covering_radius
    }

    pub fn parity_check(&self) -> &Gf2Matrix {
        &self.h
    }

    /// `H x`, a vector of `n - k` bits.
    pub fn syndrome(&self, x: &BitVector) -> Result<BitVector> {
        self.h.mul_vector(x)
    }

    /// The coset leader whose syndrome is `s`.
    pub fn leader_for_syndrome(&self, s: &BitVector) -> Result<BitVector> {
        if s.len() != self.redundancy() {
            return Err(Error::DimensionMismatch {
                context: "LinearCode::leader_for_syndrome",
                expected: self.redundancy(),
                actual: s.len(),
            });
        }
        BitVector::from_word(self.leaders[s.word() as usize], self.n)
    }

    /// Reduces `a` modulo the code: the leader of the coset containing `a`.
    pub fn mod_code(&self, a: &BitVector) -> Result<BitVector> {
        let s = self.syndrome(a)?;
        self.leader_for_syndrome(&s)
    }

    /// Whether every coset leader keeps its normalized weight within `q`.
    pub fn is_admissible(&self, q: f64) -> bool {
        self.covering_radius as f64 / self.n as f64 <= q
    }

    /// Sphere-covering check: the cosets are covered by the Hamming ball of
    /// radius equal to the covering radius, so `2^(n-k)` can be at most the
    /// ball volume.
    pub fn satisfies_volume_bound(&self) -> bool {
        let mut volume = 0u128;
        let mut coeff = 1u128;
        for w in 0..=self.covering_radius {
            if w > 0 {
                coeff = coeff * (self.n - w + 1) as u128 / w as u128;
            }
            volume = volume.saturating_add(coeff);
        }
        (1u128 << self.redundancy()) <= volume
    }
}

/// The `(7, 4)` Hamming code; covering radius 1.
pub fn hamming_7_4() -> LinearCode {
    let h = Gf2Matrix::parse_rows(&["0001111", "0110011", "1010101"])
        .expect("fixture parity check is well formed");
    LinearCode::from_parity_check(h)
        .expect("fixture parity check has full rank")
        .with_id("hamming_7_4")
}

/// Generator polynomial of the binary Golay code,
/// `x^11 + x^9 + x^7 + x^6 + x^5 + x + 1`.
const GOLAY_GEN: u32 = 0b1010_1110_0011;

fn golay_poly_mod(mut r: u32) -> u32 {
    while r >> 11 != 0 {
        let degree = 31 - r.leading_zeros();
        r ^= GOLAY_GEN << (degree - 11);
    }
    r
}

/// The `(23, 12)` binary Golay code; covering radius 3. Column `j` of the
/// parity check holds the coefficients of `x^j` reduced by the generator
/// polynomial, so the first eleven columns form an identity block.
pub fn golay_23_12() -> LinearCode {
    let mut h = Gf2Matrix::zeros(11, 23).expect("fixture dimensions are valid");
    for j in 0..23 {
        let rem = golay_poly_mod(1u32 << j);
        for r in 0..11 {
            if rem >> r & 1 == 1 {
                h.set(r, j, true);
            }
        }
    }
    LinearCode::from_parity_check(h)
        .expect("fixture parity check has full rank")
        .with_id("golay_23_12")
}

/// The length-`n` repetition code; covering radius `n / 2`.
pub fn repetition(n: usize) -> Result<LinearCode> {
    if !(2..=64).contains(&n) {
        return Err(Error::InvalidLength(n));
    }
    let mut h = Gf2Matrix::zeros(n - 1, n)?;
    for r in 0..n - 1 {
        h.set(r, r, true);
        h.set(r, r + 1, true);
    }
    Ok(LinearCode::from_parity_check(h)?.with_id(format!("repetition_{n}")))
}

/// The length-`n` single-parity-check code; covering radius 1.
pub fn single_parity_check(n: usize) -> Result<LinearCode> {
    if !(2..=64).contains(&n) {
        return Err(Error::InvalidLength(n));
    }
    let ones = BitVector::from_word(if n == 64 { u64::MAX } else { (1 << n) - 1 }, n)?;
    let h = Gf2Matrix::from_rows(&[ones])?;
    Ok(LinearCode::from_parity_check(h)?.with_id(format!("parity_{n}")))
}

/// Draws random full-rank parity checks and keeps the code with the smallest
/// covering radius. Every draw counts as one attempt, including those
/// discarded for rank deficiency.
pub fn random_covering_search(n: usize, k: usize, seed: u64, attempts: u32) -> Result<LinearCode> {
    if !(2..=64).contains(&n) {
        return Err(Error::InvalidLength(n));
    }
    if k == 0 || k >= n {
        return Err(Error::Config(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    if attempts == 0 {
        return Err(Error::Config("need at least one attempt".into()));
    }
    let m = n - k;
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<LinearCode> = None;

    for _ in 0..attempts {
        let rows: Vec<BitVector> = (0..m)
            .map(|_| BitVector::from_word(rng.next_u64() & mask, n))
            .collect::<Result<Vec<_>>>()?;
        let h = Gf2Matrix::from_rows(&rows)?;
        if h.rank() != m {
            continue;
        }
        let code = LinearCode::from_parity_check(h)?;
        if best
            .as_ref()
            .is_none_or(|b| code.covering_radius() < b.covering_radius())
        {
            best = Some(code);
        }
    }

    best.map(|c| {
        let id = format!("random_{n}_{k}_s{seed}");
        c.with_id(id)
    })
    .ok_or_else(|| Error::Config(format!("no full-rank parity check in {attempts} attempts")))
}

/// Renders a code in the text format: a header line `n k`, then `n - k`
/// parity-check rows of `0`/`1` characters.
pub fn format_code_file(code: &LinearCode) -> String {
    let mut out = format!("{} {}\n", code.n(), code.k());
    for r in 0..code.redundancy() {
        out.push_str(&code.parity_check().row(r).to_string());
        out.push('\n');
    }
    out
}

/// Parses the text format accepted by [`format_code_file`], validating the
/// dimensions and the rank of the parity check. Uses the default table cap.
pub fn parse_code_file(text: &str) -> Result<LinearCode> {
    parse_code_file_with_cap(text, DEFAULT_TABLE_CAP_BITS)
}

pub fn parse_code_file_with_cap(text: &str, cap_bits: u64) -> Result<LinearCode> {
    let mut lines = text.lines().map(str::trim);
    let header = lines
        .by_ref()
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::Parse("empty code file".into()))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .ok_or_else(|| Error::Parse("missing n in header".into()))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad header line {header:?}")))?;
    let k: usize = parts
        .next()
        .ok_or_else(|| Error::Parse("missing k in header".into()))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad header line {header:?}")))?;
    if parts.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens in header {header:?}")));
    }
    if n == 0 || n > 64 || k == 0 || k >= n {
        return Err(Error::Parse(format!("unsupported dimensions n = {n}, k = {k}")));
    }

    let mut rows = Vec::with_capacity(n - k);
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let row: BitVector = line.parse()?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {:?} has {} bits, expected {n}",
                line,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != n - k {
        return Err(Error::Parse(format!(
            "expected {} parity rows, found {}",
            n - k,
            rows.len()
        )));
    }
    let h = Gf2Matrix::from_rows(&rows)?;
    LinearCode::from_parity_check_with_cap(h, cap_bits)
}
