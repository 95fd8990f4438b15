//! Exhaustive scans over twists of fixed degree and leading coefficient,
//! the coset audit, and naive parameter counts for rank loci.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::FieldCtx;
use crate::motive::{analytic_rank, RankEngine, TwistedPower};
use crate::poly::{Poly, PolyRing};

/// Default cap on the number of enumerated polynomials per scan: 3^16.
pub const DEFAULT_CAP: u64 = 43_046_721;
pub const DEFAULT_WITNESS_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// Every squarefree P of degree m with a_m = lead.
    AllSquarefree,
    /// Squarefree P = Σ c_i (θ^q − θ)^i with c_{m/q} = lead.
    ShiftStable,
}

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub field: FieldCtx,
    pub n: u32,
    pub m: usize,
    pub lead: u32,
    pub mode: ScanMode,
    pub thresholds: Vec<u32>,
    pub workers: usize,
    pub chunk_size: u64,
    pub cap: u64,
    pub witness_cap: usize,
    /// One polynomial in `audit_rate` (chosen by a seeded hash of its index)
    /// is recomputed along the exact path and compared. 0 disables.
    pub audit_rate: u64,
    pub seed: u64,
    pub checkpoint: Option<PathBuf>,
}

impl ScanSpec {
    pub fn new(field: FieldCtx, n: u32, m: usize, lead: u32, mode: ScanMode) -> Self {
        ScanSpec {
            field,
            n,
            m,
            lead,
            mode,
            thresholds: (1..=5).collect(),
            workers: std::thread::available_parallelism().map_or(1, |v| v.get()),
            chunk_size: 1 << 12,
            cap: DEFAULT_CAP,
            witness_cap: DEFAULT_WITNESS_CAP,
            audit_rate: 1000,
            seed: 0,
            checkpoint: None,
        }
    }

    /// Number of free coefficients (digits of the enumeration odometer).
    pub fn free_digits(&self) -> Result<usize> {
        match self.mode {
            ScanMode::AllSquarefree => Ok(self.m),
            ScanMode::ShiftStable => {
                let q = self.field.q() as usize;
                if self.m % q != 0 {
                    return Err(Error::Unsupported(format!("shift-stable scan needs q | m (q={q}, m={})", self.m)));
                }
                Ok(self.m / q)
            }
        }
    }

    pub fn size(&self) -> Result<u128> {
        Ok((self.field.q() as u128).pow(self.free_digits()? as u32))
    }

    fn validate(&self) -> Result<()> {
        if self.lead == 0 || self.lead >= self.field.q() {
            return Err(Error::Parse(format!("leading coefficient {} must be a nonzero field element", self.lead)));
        }
        if self.n == 0 {
            return Err(Error::ZeroTensorPower);
        }
        let size = self.size()?;
        if size > self.cap as u128 {
            return Err(Error::ScanCap { size, cap: self.cap });
        }
        Ok(())
    }
}

/// (θ^q − θ)^i for i = 0..=count.
pub fn shift_stable_basis(field: &FieldCtx, count: usize) -> Vec<Poly<u32>> {
    let ring = PolyRing::new(field.clone());
    let q = field.q() as usize;
    let mut b = vec![0u32; q + 1];
    b[1] = field.neg_el(1);
    b[q] = 1;
    let b = ring.poly(b);
    let mut out = vec![ring.constant(1)];
    for i in 1..=count {
        out.push(ring.mul_polys(&out[i - 1], &b));
    }
    out
}

/// Σ c_i (θ^q − θ)^i; fixed by every θ ↦ θ + d.
pub fn shift_stable_expand(field: &FieldCtx, c: &[u32]) -> Poly<u32> {
    let ring = PolyRing::new(field.clone());
    let basis = shift_stable_basis(field, c.len().saturating_sub(1));
    c.iter().zip(&basis).fold(Poly::zero(), |acc, (&ci, b)| ring.add_polys(&acc, &ring.scale(&ci, b)))
}

/// Little-endian base-q digits of `index`.
fn digits_of(index: u64, q: u64, len: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(len);
    let mut x = index;
    for _ in 0..len {
        v.push((x % q) as u32);
        x /= q;
    }
    v
}

/// Decodes an enumeration index: returns P and, in shift-stable mode, the
/// coefficient vector c.
pub fn decode(spec: &ScanSpec, index: u64) -> Result<(Poly<u32>, Option<Vec<u32>>)> {
    let q = spec.field.q() as u64;
    let free = spec.free_digits()?;
    let mut d = digits_of(index, q, free);
    d.push(spec.lead);
    Ok(match spec.mode {
        ScanMode::AllSquarefree => (PolyRing::new(spec.field.clone()).poly(d), None),
        ScanMode::ShiftStable => (shift_stable_expand(&spec.field, &d), Some(d)),
    })
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tallies of one (m, a) cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellTally {
    pub enumerated: u64,
    pub squarefree: u64,
    /// histogram[ρ] = number of squarefree P of rank exactly ρ.
    pub histogram: Vec<u64>,
    /// Per exact rank ρ >= 1, the smallest enumeration indices of rank ρ.
    pub witnesses: BTreeMap<u32, Vec<u64>>,
    /// How many ranks needed the exact determinant.
    pub exact_path: u64,
    pub audited: u64,
}

impl CellTally {
    fn record(&mut self, index: u64, rank: u32, cap: usize) {
        let r = rank as usize;
        if self.histogram.len() <= r {
            self.histogram.resize(r + 1, 0);
        }
        self.histogram[r] += 1;
        if rank >= 1 && cap > 0 {
            let w = self.witnesses.entry(rank).or_default();
            if w.len() < cap {
                w.push(index);
            } else if index < *w.last().expect("nonempty") {
                w.pop();
                w.push(index);
            }
            w.sort_unstable();
        }
    }

    pub fn merge(&mut self, other: &CellTally, cap: usize) {
        self.enumerated += other.enumerated;
        self.squarefree += other.squarefree;
        self.exact_path += other.exact_path;
        self.audited += other.audited;
        if self.histogram.len() < other.histogram.len() {
            self.histogram.resize(other.histogram.len(), 0);
        }
        for (i, &c) in other.histogram.iter().enumerate() {
            self.histogram[i] += c;
        }
        for (&r, idx) in &other.witnesses {
            let w = self.witnesses.entry(r).or_default();
            w.extend_from_slice(idx);
            w.sort_unstable();
            w.dedup();
            w.truncate(cap);
        }
    }

    /// Number of squarefree P with rank >= r.
    pub fn at_least(&self, r: u32) -> u64 {
        self.histogram.iter().skip(r as usize).sum()
    }

    pub fn max_rank(&self) -> Option<u32> {
        self.histogram.iter().rposition(|&c| c > 0).map(|r| r as u32)
    }
}

/// A witness polynomial in serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub index: u64,
    pub rank: u32,
    pub poly: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shift_stable_coeffs: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub m: usize,
    pub a: u32,
    pub enumerated: u64,
    pub squarefree: u64,
    pub histogram: Vec<u64>,
    /// threshold r -> count of rank >= r
    pub counts: BTreeMap<u32, u64>,
    /// threshold r -> smallest witnesses of rank >= r
    pub witnesses: BTreeMap<u32, Vec<Witness>>,
}

/// Counts 𝔮(m, a, r) of squarefree P with rank >= r, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTable {
    pub q: u32,
    pub n: u32,
    pub mode: ScanMode,
    pub thresholds: Vec<u32>,
    pub cells: Vec<TableCell>,
}

impl RankTable {
    pub fn empty(q: u32, n: u32, mode: ScanMode, thresholds: Vec<u32>) -> Self {
        RankTable { q, n, mode, thresholds, cells: Vec::new() }
    }

    pub fn cell(&self, m: usize, a: u32) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.m == m && c.a == a)
    }

    /// 𝔮(m, a, r); counts are available for every r, not only thresholds.
    pub fn count(&self, m: usize, a: u32, r: u32) -> Option<u64> {
        self.cell(m, a).map(|c| c.histogram.iter().skip(r as usize).sum())
    }

    pub fn max_rank(&self) -> Option<u32> {
        self.cells.iter().filter_map(|c| c.histogram.iter().rposition(|&x| x > 0).map(|r| r as u32)).max()
    }

    /// Adds or replaces a cell, keeping cells ordered by (m, a).
    pub fn insert(&mut self, cell: TableCell) {
        self.cells.retain(|c| !(c.m == cell.m && c.a == cell.a));
        self.cells.push(cell);
        self.cells.sort_by_key(|c| (c.m, c.a));
    }

    pub fn merge(&mut self, other: RankTable) {
        for c in other.cells {
            self.insert(c);
        }
    }

    /// `m,a,r,count` for every cell and threshold.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,a,r,count\n");
        for c in &self.cells {
            for &r in &self.thresholds {
                let n: u64 = c.histogram.iter().skip(r as usize).sum();
                s.push_str(&format!("{},{},{},{}\n", c.m, c.a, r, n));
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct CheckpointLine {
    q: u32,
    n: u32,
    mode: ScanMode,
    m: usize,
    lead: u32,
    chunk_size: u64,
    chunk: u64,
    tally: CellTally,
}

fn process_chunk(spec: &ScanSpec, engine: &RankEngine, basis: &[Poly<u32>], start: u64, end: u64) -> Result<CellTally> {
    let f = &spec.field;
    let ring = PolyRing::new(f.clone());
    let q = f.q();
    let free = spec.free_digits()?;
    let mut digits = digits_of(start, q as u64, free);
    let mut tally = CellTally::default();
    for index in start..end {
        if index > start {
            // little-endian odometer step
            for d in digits.iter_mut() {
                *d += 1;
                if *d == q {
                    *d = 0;
                } else {
                    break;
                }
            }
        }
        tally.enumerated += 1;
        let p = match spec.mode {
            ScanMode::AllSquarefree => {
                let mut v = digits.clone();
                v.push(spec.lead);
                ring.poly(v)
            }
            ScanMode::ShiftStable => {
                let mut acc = ring.scale(&spec.lead, &basis[free]);
                for (i, &c) in digits.iter().enumerate() {
                    if c != 0 {
                        acc = ring.add_polys(&acc, &ring.scale(&c, &basis[i]));
                    }
                }
                acc
            }
        };
        if !ring.is_squarefree(&p)? {
            continue;
        }
        tally.squarefree += 1;
        let tp = TwistedPower::new(f.clone(), p, spec.n)?;
        let out = engine.rank_detailed(&tp);
        if out.exact {
            tally.exact_path += 1;
        }
        if spec.audit_rate > 0 && splitmix(index ^ splitmix(spec.seed)) % spec.audit_rate == 0 {
            tally.audited += 1;
            let full = analytic_rank(&tp);
            if full != out.rank {
                return Err(Error::AuditMismatch { poly: tp.poly().to_text(), fast: out.rank, full });
            }
        }
        tally.record(index, out.rank, spec.witness_cap);
    }
    Ok(tally)
}

fn read_checkpoint(spec: &ScanSpec, path: &PathBuf) -> Result<BTreeMap<u64, CellTally>> {
    let mut done = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(e.into()),
    };
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CheckpointLine = serde_json::from_str(&line)
            .map_err(|e| Error::Checkpoint(format!("line {}: {e}", lineno + 1)))?;
        if rec.q == spec.field.q()
            && rec.n == spec.n
            && rec.mode == spec.mode
            && rec.m == spec.m
            && rec.lead == spec.lead
        {
            if rec.chunk_size != spec.chunk_size {
                return Err(Error::Checkpoint(format!(
                    "chunk size {} in checkpoint differs from {}",
                    rec.chunk_size, spec.chunk_size
                )));
            }
            done.insert(rec.chunk, rec.tally);
        }
    }
    Ok(done)
}

/// Scans every squarefree P matching `spec` and returns its table cell.
///
/// Work is split into index chunks; chunk tallies are merged in chunk order
/// so the result does not depend on the worker count. With a checkpoint
/// path, finished chunks are appended as JSON lines and skipped on rerun.
pub fn run_scan(spec: &ScanSpec) -> Result<RankTable> {
    spec.validate()?;
    let size = spec.size()? as u64;
    let free = spec.free_digits()?;
    let k_max = {
        let p = decode(spec, 0)?.0;
        TwistedPower::new(spec.field.clone(), p, spec.n)?.k_min()
    };
    let engine = RankEngine::new(&spec.field, spec.n, k_max)?;
    let basis = match spec.mode {
        ScanMode::ShiftStable => shift_stable_basis(&spec.field, free),
        ScanMode::AllSquarefree => Vec::new(),
    };
    let chunk = spec.chunk_size.max(1);
    let chunks = size.div_ceil(chunk);
    let mut done = match &spec.checkpoint {
        Some(path) => read_checkpoint(spec, path)?,
        None => BTreeMap::new(),
    };
    let todo: Vec<u64> = (0..chunks).filter(|c| !done.contains_key(c)).collect();
    let writer = match &spec.checkpoint {
        Some(path) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(path)?)),
        None => None,
    };

    let run = |c: u64| -> Result<(u64, CellTally)> {
        let start = c * chunk;
        let end = (start + chunk).min(size);
        let tally = process_chunk(spec, &engine, &basis, start, end)?;
        if let Some(w) = &writer {
            let line = CheckpointLine {
                q: spec.field.q(),
                n: spec.n,
                mode: spec.mode,
                m: spec.m,
                lead: spec.lead,
                chunk_size: chunk,
                chunk: c,
                tally: tally.clone(),
            };
            let mut f = w.lock().expect("checkpoint lock");
            writeln!(f, "{}", serde_json::to_string(&line)?)?;
            f.flush()?;
        }
        Ok((c, tally))
    };

    let results: Vec<Result<(u64, CellTally)>> = run_chunks(spec.workers, &todo, run)?;
    for r in results {
        let (c, t) = r?;
        done.insert(c, t);
    }
    let mut total = CellTally::default();
    for t in done.values() {
        total.merge(t, spec.witness_cap);
    }
    let mut table = RankTable::empty(spec.field.q(), spec.n, spec.mode, spec.thresholds.clone());
    table.insert(build_cell(spec, &total)?);
    Ok(table)
}

#[cfg(feature = "parallel")]
fn run_chunks<T: Send>(
    workers: usize,
    todo: &[u64],
    run: impl Fn(u64) -> Result<T> + Sync + Send,
) -> Result<Vec<Result<T>>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    Ok(pool.install(|| todo.par_iter().map(|&c| run(c)).collect()))
}

#[cfg(not(feature = "parallel"))]
fn run_chunks<T>(_workers: usize, todo: &[u64], run: impl Fn(u64) -> Result<T>) -> Result<Vec<Result<T>>> {
    Ok(todo.iter().map(|&c| run(c)).collect())
}

fn build_cell(spec: &ScanSpec, total: &CellTally) -> Result<TableCell> {
    let mut counts = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for &r in &spec.thresholds {
        counts.insert(r, total.at_least(r));
        let rr = r.max(1);
        let mut idx: Vec<(u64, u32)> = total
            .witnesses
            .iter()
            .filter(|(&rank, _)| rank >= rr)
            .flat_map(|(&rank, v)| v.iter().map(move |&i| (i, rank)))
            .collect();
        idx.sort_unstable();
        idx.truncate(spec.witness_cap);
        let ws = idx
            .into_iter()
            .map(|(index, rank)| {
                let (p, c) = decode(spec, index)?;
                Ok(Witness {
                    index,
                    rank,
                    poly: p.to_text(),
                    shift_stable_coeffs: c.map(|c| c.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        witnesses.insert(r, ws);
    }
    Ok(TableCell {
        m: spec.m,
        a: spec.lead,
        enumerated: total.enumerated,
        squarefree: total.squarefree,
        histogram: total.histogram.clone(),
        counts,
        witnesses,
    })
}

/// Runs one scan per (m, lead) pair and collects the cells in one table.
pub fn run_scans(template: &ScanSpec, degrees: &[usize], leads: &[u32]) -> Result<RankTable> {
    let mut table = RankTable::empty(template.field.q(), template.n, template.mode, template.thresholds.clone());
    for &m in degrees {
        for &a in leads {
            let mut spec = template.clone();
            spec.m = m;
            spec.lead = a;
            table.merge(run_scan(&spec)?);
        }
    }
    Ok(table)
}

/// Coset audit results for one (m, a).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRow {
    pub m: usize,
    pub a: u32,
    pub in_coset: bool,
    pub total: u64,
    pub rank_at_least_one: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetReport {
    pub q: u32,
    pub n: u32,
    pub m_max: usize,
    pub rows: Vec<CosetRow>,
    /// Coset members of rank 0 (must be empty).
    pub violations: Vec<String>,
    /// (a_m, m mod (q−1)) -> (total, rank >= 1) over all enumerated P.
    pub classes: BTreeMap<String, (u64, u64)>,
}

impl CosetReport {
    pub fn coset_members(&self) -> u64 {
        self.rows.iter().filter(|r| r.in_coset).map(|r| r.total).sum()
    }

    /// Fraction of rank >= 1 among P off the coset.
    pub fn off_coset_frequency(&self) -> f64 {
        let (t, r) = self
            .rows
            .iter()
            .filter(|r| !r.in_coset)
            .fold((0u64, 0u64), |(t, r), row| (t + row.total, r + row.rank_at_least_one));
        if t == 0 {
            0.0
        } else {
            r as f64 / t as f64
        }
    }
}

/// Checks every P (squarefree or not) of degree <= m_max: members of the
/// distinguished coset must have rank >= 1. Uses the exact determinant.
pub fn coset_audit(field: &FieldCtx, n: u32, m_max: usize) -> Result<CosetReport> {
    let q = field.q();
    let ring = PolyRing::new(field.clone());
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut classes: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for m in 0..=m_max {
        let total = (q as u64).pow(m as u32);
        for a in 1..q {
            let mut row = CosetRow { m, a, in_coset: false, total, rank_at_least_one: 0 };
            let key = format!("a={a},m mod {}={}", q - 1, m % (q as usize - 1));
            for idx in 0..total {
                let mut v = digits_of(idx, q as u64, m);
                v.push(a);
                let tp = TwistedPower::new(field.clone(), ring.poly(v), n)?;
                row.in_coset = tp.in_distinguished_coset();
                let r = analytic_rank(&tp);
                if r >= 1 {
                    row.rank_at_least_one += 1;
                } else if row.in_coset {
                    violations.push(tp.poly().to_text());
                }
            }
            let e = classes.entry(key).or_default();
            e.0 += row.total;
            e.1 += row.rank_at_least_one;
            rows.push(row);
        }
    }
    Ok(CosetReport { q, n, m_max, rows, violations, classes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimMode {
    Single,
    InfiniteFamily,
    ShiftStable,
}

/// Naive expected dimension of the rank >= r locus for one (m, a).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedDim {
    pub m: usize,
    pub a: u32,
    pub r: u32,
    /// Size of the block left after splitting off trailing rows with a
    /// constant diagonal.
    pub block: usize,
    /// Split-off rows whose diagonal is the constant 1, each forcing a zero.
    pub forced: u32,
    pub parameters: i64,
    pub equations: i64,
    pub dim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub q: u32,
    pub r: u32,
    pub mode: DimMode,
    /// 2q − 3
    pub bound: u32,
    /// Largest r passing the feasibility test of this mode.
    pub max_feasible_r: u32,
    pub feasible: bool,
    /// Smallest k >= r satisfying k(q−1) − 1 >= (r−1)k − (r−1)(r−2)/2, if any.
    pub k: Option<usize>,
    pub equations: Option<i64>,
    pub parameters: Option<i64>,
    pub expected: Vec<ExpectedDim>,
}

/// r0(k+1) − r0(r0−1)/2: conditions D_0 = … = D_{r0−1} = 0 for a k×k matrix.
pub fn equation_count(r0: u64, k: u64) -> u64 {
    r0 * (k + 1) - r0 * r0.saturating_sub(1) / 2
}

fn single_slack(q: i64, r: i64, k: i64) -> i64 {
    k * (q - 1) - 1 - ((r - 1) * k - (r - 1) * (r - 2) / 2)
}

fn smallest_k(q: u32, r: u32) -> Option<usize> {
    let (q, r) = (q as i64, r as i64);
    // slack is linear in k with slope q − r; if it is negative at k = r and
    // the slope is not positive, it stays negative.
    let mut k = r.max(1);
    loop {
        if single_slack(q, r, k) >= 0 {
            return Some(k as usize);
        }
        if q - r <= 0 || k > r + 4 * q + 64 {
            return None;
        }
        k += 1;
    }
}

fn infinitely_many(q: u32, r: u32) -> bool {
    let (q, r) = (q as i64, r as i64);
    match (q - r).signum() {
        1 => true,
        0 => single_slack(q, r, r) >= 0,
        _ => false,
    }
}

/// Naive dimension count for the rank >= r locus among P of degree m with
/// a_m = a (n = tensor power). Trailing rows of the k_min matrix that are
/// zero left of the diagonal for every P, with a constant diagonal, split
/// off; those with diagonal 1 force one order of vanishing each.
pub fn expected_dim(q: u32, n: u32, m: usize, a: u32, r: u32, shift_stable: bool) -> ExpectedDim {
    let qq = q as i64;
    let (mi, ni) = (m as i64, n as i64);
    let k = (mi + ni + qq - 2) / (qq - 1);
    let sign_one = |a: u32| -> bool {
        // (−1)^n a_m == 1 in F_q (prime q assumed for the sign)
        if n % 2 == 0 {
            a == 1
        } else {
            a as i64 == qq - 1
        }
    };
    let mut size = k;
    let mut forced = 0u32;
    while size > 0 {
        let row = size - 1;
        let lo = qq * (row + 1) - 1 - mi - ni;
        if lo < row {
            break;
        }
        let top = qq * (row + 1) - row - 1;
        if top - ni > mi {
            // zero diagonal
        } else if top - ni == mi {
            if sign_one(a) {
                forced += 1;
            }
        } else {
            break;
        }
        size -= 1;
    }
    let r0 = r.saturating_sub(forced) as i64;
    let equations = if r0 > size {
        i64::MAX / 4
    } else {
        (0..r0)
            .map(|i| {
                let deg = ni * (size - i);
                if shift_stable {
                    deg / qq + 1
                } else {
                    deg + 1
                }
            })
            .sum()
    };
    let parameters = if shift_stable { mi / qq } else { mi };
    ExpectedDim {
        m,
        a,
        r,
        block: size as usize,
        forced,
        parameters,
        equations,
        dim: parameters.saturating_sub(equations).max(-1_000_000),
    }
}

pub fn dim_report(q: u32, n: u32, r: u32, mode: DimMode, degrees: &[usize]) -> DimReport {
    let bound = (2 * q).saturating_sub(3).max(1);
    let (max_feasible_r, feasible) = match mode {
        DimMode::InfiniteFamily => {
            let mut best = 0;
            let mut t = 1;
            while infinitely_many(q, t) {
                best = t;
                t += 1;
            }
            (best, infinitely_many(q, r))
        }
        _ => {
            let mut best = 0;
            let mut t = 1;
            while smallest_k(q, t).is_some() {
                best = t;
                t += 1;
            }
            (best, smallest_k(q, r).is_some())
        }
    };
    let k = smallest_k(q, r);
    let rr = r as i64;
    let equations = k.map(|k| (rr - 1) * k as i64 - (rr - 1) * (rr - 2) / 2);
    let parameters = k.map(|k| k as i64 * (q as i64 - 1) - 1);
    let st = mode == DimMode::ShiftStable;
    let expected = degrees
        .iter()
        .filter(|&&m| !st || m % q as usize == 0)
        .flat_map(|&m| (1..q).map(move |a| expected_dim(q, n, m, a, r, st)))
        .collect();
    DimReport { q, r, mode, bound, max_feasible_r, feasible, k, equations, parameters, expected }
}

/// Indices already present in a checkpoint file, for reporting.
pub fn checkpoint_chunks(spec: &ScanSpec) -> Result<HashSet<u64>> {
    match &spec.checkpoint {
        Some(p) => Ok(read_checkpoint(spec, p)?.into_keys().collect()),
        None => Ok(HashSet::new()),
    }
}
