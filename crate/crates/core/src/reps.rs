//! Faithful diagonal representations of finite abelian groups, up to
//! d-equivalence, and their filtering to smooth-form candidates.
//!
//! A diagonal representation of G in m variables is a list of m characters
//! (one per coordinate). Writing the character group Ĝ additively, x^e is
//! fixed by ρ(G) iff Σ e_c χ_c = 0. Two representations are d-equivalent when
//! ⟨ρ(G), ξ_d I⟩ agree up to a permutation of coordinates, which for lists of
//! characters means: the same multiset after an automorphism of Ĝ and a shift
//! of every column by one character of order dividing d.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cyclo::consts;
use crate::poly::{monomials, Mono, Poly};
use crate::smooth::{is_smooth, support_non_smooth, NonSmoothWitness, Smoothness};
use crate::{CycMatrix, CycNum, Error, Form, Matrix, Result};

/// Cap on the brute-force automorphism search of Ĝ.
const AUT_SEARCH_CAP: u64 = 5_000_000;

/// A finite abelian group by invariant factors n_1 | n_2 | … | n_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianSpec {
    pub factors: Vec<u32>,
}

impl AbelianSpec {
    pub fn new(factors: Vec<u32>) -> Result<AbelianSpec> {
        if factors.iter().any(|&n| n < 2) {
            return Err(Error::Domain("invariant factors must be at least 2".into()));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Domain("invariant factors must form a divisibility chain".into()));
        }
        Ok(AbelianSpec { factors })
    }

    /// The group C_{a_1} × … × C_{a_r}, rewritten by invariant factors.
    pub fn from_orders(orders: &[u32]) -> Result<AbelianSpec> {
        if orders.iter().any(|&n| n == 0) {
            return Err(Error::Domain("cyclic orders must be positive".into()));
        }
        // prime powers per prime, largest first
        let mut by_prime: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for &n in orders {
            let mut n = n;
            let mut p = 2;
            while n > 1 {
                if n % p == 0 {
                    let mut q = 1;
                    while n % p == 0 {
                        n /= p;
                        q *= p;
                    }
                    by_prime.entry(p).or_default().push(q);
                }
                p += 1;
            }
        }
        let len = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u32; len];
        for v in by_prime.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in v.iter().enumerate() {
                factors[len - 1 - i] *= q;
            }
        }
        AbelianSpec::new(factors)
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|&n| n as u64).product()
    }

    pub fn exponent(&self) -> u32 {
        self.factors.last().copied().unwrap_or(1)
    }
}

impl fmt::Display for AbelianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let s: Vec<String> = self.factors.iter().map(|n| format!("C{n}")).collect();
        f.write_str(&s.join("×"))
    }
}

/// Ĝ ≅ ⊕ Z/n_j with elements indexed in mixed radix.
#[derive(Clone, Debug)]
struct Characters {
    factors: Vec<u32>,
    size: usize,
    digits: Vec<Vec<u32>>,
    /// size × size addition table, for groups small enough to tabulate
    add: Option<Vec<u16>>,
}

const TABLE_LIMIT: usize = 4096;

impl Characters {
    fn new(spec: &AbelianSpec) -> Characters {
        let size = spec.order() as usize;
        let mut ch = Characters { factors: spec.factors.clone(), size, digits: Vec::new(), add: None };
        ch.digits = (0..size).map(|i| ch.decode(i)).collect();
        if size <= TABLE_LIMIT {
            let mut t = vec![0u16; size * size];
            for x in 0..size {
                for y in 0..size {
                    t[x * size + y] = ch.combine(&[(1, x), (1, y)]) as u16;
                }
            }
            ch.add = Some(t);
        }
        ch
    }
    fn decode(&self, mut i: usize) -> Vec<u32> {
        self.factors
            .iter()
            .map(|&n| {
                let v = (i % n as usize) as u32;
                i /= n as usize;
                v
            })
            .collect()
    }
    fn encode(&self, v: &[u32]) -> usize {
        let mut i = 0;
        for (k, &n) in self.factors.iter().enumerate().rev() {
            i = i * n as usize + v[k] as usize;
        }
        i
    }
    fn sum(&self, x: usize, y: usize) -> usize {
        match &self.add {
            Some(t) => t[x * self.size + y] as usize,
            None => self.combine(&[(1, x), (1, y)]),
        }
    }
    /// Σ c_i χ_i, as an index.
    fn combine(&self, coeffs: &[(i64, usize)]) -> usize {
        let k = self.factors.len();
        let mut acc = [0i64; 16];
        for &(c, idx) in coeffs {
            let owned;
            let dg: &[u32] = if self.digits.is_empty() {
                owned = self.decode(idx);
                &owned
            } else {
                &self.digits[idx]
            };
            for j in 0..k {
                acc[j] += c * dg[j] as i64;
            }
        }
        let mut i = 0;
        for j in (0..k).rev() {
            let n = self.factors[j] as i64;
            i = i * n as usize + acc[j].rem_euclid(n) as usize;
        }
        i
    }
    /// Whether Σ c_i χ_i vanishes, without allocating.
    fn vanishes(&self, coeffs: impl Iterator<Item = (i64, usize)>) -> bool {
        let k = self.factors.len();
        let mut acc = [0i64; 16];
        for (c, idx) in coeffs {
            for j in 0..k {
                acc[j] += c * self.digits[idx][j] as i64;
            }
        }
        (0..k).all(|j| acc[j].rem_euclid(self.factors[j] as i64) == 0)
    }
    /// Order of the subgroup generated by the given characters.
    fn span(&self, gens: &[usize]) -> usize {
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.sum(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
    /// Automorphisms of Ĝ as index permutations, by images of the standard generators.
    fn automorphisms(&self) -> Result<Vec<Vec<usize>>> {
        let k = self.factors.len();
        let cands: Vec<Vec<usize>> = self
            .factors
            .iter()
            .map(|&n| (0..self.size).filter(|&x| self.combine(&[(n as i64, x)]) == 0).collect())
            .collect();
        let total: u64 = cands.iter().map(|c| c.len() as u64).product();
        if total > AUT_SEARCH_CAP {
            return Err(Error::Domain(format!("automorphism search of {total} candidates exceeds the cap")));
        }
        let mut out = Vec::new();
        let mut choice = vec![0usize; k];
        loop {
            let imgs: Vec<usize> = (0..k).map(|j| cands[j][choice[j]]).collect();
            let map: Vec<usize> = (0..self.size)
                .map(|x| {
                    let v = self.decode(x);
                    let terms: Vec<(i64, usize)> = v.iter().zip(&imgs).map(|(&a, &g)| (a as i64, g)).collect();
                    self.combine(&terms)
                })
                .collect();
            let distinct: HashSet<usize> = map.iter().copied().collect();
            if distinct.len() == self.size {
                out.push(map);
            }
            // odometer
            let mut j = 0;
            loop {
                if j == k {
                    return Ok(out);
                }
                choice[j] += 1;
                if choice[j] < cands[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
        }
    }
}

/// A canonical encoding of D = ⟨ρ(G), ξ_d I⟩ ⊂ (Z/L)^m: its elements as
/// sorted rows after the lexicographically least column order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Canonical {
    pub l: u32,
    pub rows: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepClass {
    pub spec: AbelianSpec,
    pub m: usize,
    pub d: usize,
    /// k×m exponents: coordinate c carries ζ_{n_j}^{exp[j][c]} under the j-th generator.
    pub exp: Vec<Vec<u32>>,
}

impl RepClass {
    pub fn generators(&self) -> Vec<CycMatrix> {
        self.spec
            .factors
            .iter()
            .zip(&self.exp)
            .map(|(&n, row)| Matrix::diagonal(row.iter().map(|&e| CycNum::zeta(n, e as i64)).collect()))
            .collect()
    }

    pub fn canonical(&self) -> Canonical {
        canonicalize(self)
    }

    /// Exponent matrix written as `a b c; d e f` (rows are generators).
    pub fn exp_text(&self) -> String {
        self.exp.iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("; ")
    }

    fn character_indices(&self, ch: &Characters) -> Vec<usize> {
        (0..self.m).map(|c| ch.encode(&self.exp.iter().map(|r| r[c]).collect::<Vec<_>>())).collect()
    }

    /// Degree-d monomials fixed by every generator.
    pub fn invariant_support(&self) -> Vec<Mono> {
        let ch = Characters::new(&self.spec);
        Scanner::new(self.m, self.d).support(&ch, &self.character_indices(&ch))
    }
}

/// Degree-d monomials with their (exponent, variable) terms, built once per run.
struct Scanner {
    monos: Vec<Mono>,
    terms: Vec<Vec<(i64, usize)>>,
}

impl Scanner {
    fn new(m: usize, d: usize) -> Scanner {
        let monos = monomials(m, d);
        let terms = monos.iter().map(|mo| (0..m).filter(|&c| mo.get(c) > 0).map(|c| (mo.get(c) as i64, c)).collect()).collect();
        Scanner { monos, terms }
    }
    fn support(&self, ch: &Characters, cols: &[usize]) -> Vec<Mono> {
        self.monos
            .iter()
            .zip(&self.terms)
            .filter(|(_, t)| ch.vanishes(t.iter().map(|&(e, c)| (e, cols[c]))))
            .map(|(mo, _)| *mo)
            .collect()
    }
}

/// Elements of the diagonal group generated by exponent vectors in (Z/L)^m.
pub fn diagonal_subgroup(gens: &[Vec<u32>], l: u32) -> Vec<Vec<u32>> {
    let m = gens.first().map_or(0, |g| g.len());
    let id = vec![0u32; m];
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<u32> = x.iter().zip(g).map(|(a, b)| (a + b) % l).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<Vec<u32>> = seen.into_iter().collect();
    v.sort();
    v
}

/// Least encoding of a diagonal group over all column permutations. Columns
/// are first grouped by their value multiset (a permutation invariant); only
/// orders within equal groups are searched.
pub fn canonical_subgroup(elements: &[Vec<u32>], l: u32) -> Canonical {
    let m = elements.first().map_or(0, |e| e.len());
    let profile = |c: usize| {
        let mut v: Vec<u32> = elements.iter().map(|e| e[c]).collect();
        v.sort_unstable();
        v
    };
    let mut cols: Vec<(Vec<u32>, usize)> = (0..m).map(|c| (profile(c), c)).collect();
    cols.sort();
    let groups: Vec<Vec<usize>> = cols
        .chunk_by(|a, b| a.0 == b.0)
        .map(|g| g.iter().map(|(_, c)| *c).collect())
        .collect();
    let mut best: Option<Vec<Vec<u32>>> = None;
    let mut order: Vec<usize> = Vec::with_capacity(m);
    fn rec(
        gi: usize,
        groups: &[Vec<usize>],
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        elements: &[Vec<u32>],
        best: &mut Option<Vec<Vec<u32>>>,
    ) {
        if gi == groups.len() {
            let mut rows: Vec<Vec<u32>> = elements.iter().map(|e| order.iter().map(|&c| e[c]).collect()).collect();
            rows.sort_unstable();
            if best.as_ref().map_or(true, |b| rows < *b) {
                *best = Some(rows);
            }
            return;
        }
        let g = &groups[gi];
        let placed = order.len();
        let target = placed + g.len();
        if order.len() == target {
            rec(gi + 1, groups, used, order, elements, best);
            return;
        }
        for &c in g {
            if used[c] {
                continue;
            }
            used[c] = true;
            order.push(c);
            if order.len() == target {
                rec(gi + 1, groups, used, order, elements, best);
            } else {
                // stay inside the group until it is fully placed
                rec_inner(gi, groups, used, order, elements, best, target);
            }
            order.pop();
            used[c] = false;
        }
    }
    fn rec_inner(
        gi: usize,
        groups: &[Vec<usize>],
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        elements: &[Vec<u32>],
        best: &mut Option<Vec<Vec<u32>>>,
        target: usize,
    ) {
        for &c in &groups[gi] {
            if used[c] {
                continue;
            }
            used[c] = true;
            order.push(c);
            if order.len() == target {
                rec(gi + 1, groups, used, order, elements, best);
            } else {
                rec_inner(gi, groups, used, order, elements, best, target);
            }
            order.pop();
            used[c] = false;
        }
    }
    let mut used = vec![false; m];
    rec(0, &groups, &mut used, &mut order, elements, &mut best);
    Canonical { l, rows: best.unwrap_or_default() }
}

/// Canonical encoding of ⟨ρ(G), ξ_d I⟩.
pub fn canonicalize(class: &RepClass) -> Canonical {
    let l = class.spec.factors.iter().fold(class.d as u32, |acc, &n| acc.lcm(&n));
    let mut gens: Vec<Vec<u32>> =
        class.spec.factors.iter().zip(&class.exp).map(|(&n, row)| row.iter().map(|&e| e * (l / n)).collect()).collect();
    gens.push(vec![l / class.d as u32; class.m]);
    canonical_subgroup(&diagonal_subgroup(&gens, l), l)
}

/// Column lists (as character indices, m per class, flattened) of one
/// representative per d-equivalence class.
fn enumerate_columns(spec: &AbelianSpec, m: usize, d: usize) -> Result<(Characters, Vec<u16>)> {
    if m == 0 || d == 0 {
        return Err(Error::Domain("need m ≥ 1 and d ≥ 1".into()));
    }
    if spec.order() > u16::MAX as u64 {
        return Err(Error::Domain(format!("group of order {} is too large to enumerate", spec.order())));
    }
    let ch = Characters::new(spec);
    let auts = ch.automorphisms()?;
    let shifts: Vec<usize> = (0..ch.size).filter(|&x| ch.combine(&[(d as i64, x)]) == 0).collect();
    let mut maps: Vec<Vec<usize>> = Vec::with_capacity(auts.len() * shifts.len());
    for a in &auts {
        for &s in &shifts {
            let map: Vec<usize> = a.iter().map(|&x| ch.combine(&[(1, x), (1, s)])).collect();
            if map.iter().enumerate().any(|(i, &x)| i != x) {
                maps.push(map);
            }
        }
    }
    let mut prefix: Vec<usize> = Vec::with_capacity(m);
    let mut scratch: Vec<usize> = Vec::with_capacity(m);
    fn minimal(prefix: &[usize], maps: &[Vec<usize>], scratch: &mut Vec<usize>) -> bool {
        for map in maps {
            // the least image decides unless it ties with prefix[0]
            let least = prefix.iter().map(|&x| map[x]).min().unwrap_or(0);
            if least != prefix[0] {
                if least < prefix[0] {
                    return false;
                }
                continue;
            }
            scratch.clear();
            scratch.extend(prefix.iter().map(|&x| map[x]));
            scratch.sort_unstable();
            if scratch.as_slice() < prefix {
                return false;
            }
        }
        true
    }
    fn rec(
        start: usize,
        m: usize,
        ch: &Characters,
        maps: &[Vec<usize>],
        prefix: &mut Vec<usize>,
        scratch: &mut Vec<usize>,
        out: &mut Vec<u16>,
    ) {
        if prefix.len() == m {
            // projective faithfulness: the differences χ_c − χ_1 generate Ĝ
            let diffs: Vec<usize> = prefix.iter().map(|&c| ch.combine(&[(1, c), (-1, prefix[0])])).collect();
            if ch.span(&diffs) == ch.size {
                out.extend(prefix.iter().map(|&c| c as u16));
            }
            return;
        }
        for c in start..ch.size {
            prefix.push(c);
            if minimal(prefix, maps, scratch) {
                rec(c, m, ch, maps, prefix, scratch, out);
            }
            prefix.pop();
        }
    }
    let mut flat = Vec::new();
    rec(0, m, &ch, &maps, &mut prefix, &mut scratch, &mut flat);
    Ok((ch, flat))
}

fn class_of(spec: &AbelianSpec, ch: &Characters, cols: &[u16], d: usize) -> RepClass {
    let decoded: Vec<Vec<u32>> = cols.iter().map(|&c| ch.decode(c as usize)).collect();
    let exp = (0..spec.factors.len()).map(|j| decoded.iter().map(|v| v[j]).collect()).collect();
    RepClass { spec: spec.clone(), m: cols.len(), d, exp }
}

/// One representative per d-equivalence class of diagonal representations of
/// G in m variables with ρ faithful and ρ(G) free of nontrivial scalars.
pub fn enumerate_diagonal_reps(spec: &AbelianSpec, m: usize, d: usize) -> Result<Vec<RepClass>> {
    let (ch, flat) = enumerate_columns(spec, m, d)?;
    Ok(flat.chunks(m).map(|cols| class_of(spec, &ch, cols, d)).collect())
}

/// Number of classes, without materializing them.
pub fn count_diagonal_reps(spec: &AbelianSpec, m: usize, d: usize) -> Result<usize> {
    Ok(enumerate_columns(spec, m, d)?.1.len() / m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// A smooth form fixed by the representation.
    Accepted(Form),
    RejectedNonSmooth(NonSmoothWitness),
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepVerdict {
    pub class: RepClass,
    pub status: Status,
    pub invariant_support: Vec<Mono>,
}

impl RepVerdict {
    pub fn accepted(&self) -> bool {
        matches!(self.status, Status::Accepted(_))
    }
}

pub const STRUCTURED_CANDIDATES: usize = 64;
pub const RANDOM_CANDIDATES: usize = 200;
const REPLAYS: usize = 20;

fn coefficient_pool() -> Vec<CycNum> {
    // 1, −1, ξ3, 3(√3 − 1) at conductor 12
    let s3 = consts::sqrt3().embed(12).unwrap();
    let hesse = &(&s3 - &CycNum::one(12)) * &CycNum::from_int(12, 3);
    vec![CycNum::one(12), CycNum::from_int(12, -1), CycNum::zeta(12, 4), hesse]
}

fn random_member(support: &[Mono], m: usize, rng: &mut ChaCha8Rng, pool: &[CycNum]) -> Form {
    Poly::from_terms(m, support.iter().map(|mo| (*mo, pool[rng.gen_range(0..pool.len())].clone())).collect::<Vec<_>>())
}

/// Forms built from one x_i^{d−1}x_j per variable, pure powers first.
fn structured_candidates(support: &[Mono], m: usize, d: usize, limit: usize) -> Vec<Form> {
    let options: Vec<Vec<Mono>> = (0..m)
        .map(|i| {
            let mut o: Vec<Mono> = Vec::new();
            let pure = Mono::var_pow(i, d as u16);
            if support.contains(&pure) {
                o.push(pure);
            }
            for j in (0..m).filter(|&j| j != i) {
                let mo = Mono::var_pow(i, d as u16 - 1).mul(&Mono::var(j));
                if support.contains(&mo) {
                    o.push(mo);
                }
            }
            o
        })
        .collect();
    if options.iter().any(|o| o.is_empty()) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for t in 0..limit {
        let mut rest = t;
        let mut monos: Vec<Mono> = Vec::with_capacity(m);
        for o in &options {
            monos.push(o[rest % o.len()]);
            rest /= o.len();
        }
        if rest > 0 && t > 0 {
            break;
        }
        monos.sort();
        monos.dedup();
        if seen.insert(monos.clone()) {
            out.push(Poly::from_terms(m, monos.into_iter().map(|mo| (mo, CycNum::one(1))).collect::<Vec<_>>()));
        }
    }
    out
}

fn decide(class: RepClass, ctx: (&Characters, &Scanner), seed: u64, budget: usize) -> Result<RepVerdict> {
    let m = class.m;
    let d = class.d;
    let support = ctx.1.support(ctx.0, &class.character_indices(ctx.0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if d == 3 {
        if let Some(w) = support_non_smooth(&support, m) {
            // zero coefficients included, so sub-supports are exercised too
            let small: Vec<CycNum> = (-2..=2).map(|k| CycNum::from_int(1, k)).collect();
            // the patterns only shrink with the support; replay on random members anyway
            let sound = support.is_empty()
                || (0..REPLAYS).all(|_| w.replay(&random_member(&support, m, &mut rng, &small)));
            let status = if sound { Status::RejectedNonSmooth(w) } else { Status::Undecided };
            return Ok(RepVerdict { class, status, invariant_support: support });
        }
    }
    let pool = coefficient_pool();
    let structured = structured_candidates(&support, m, d, STRUCTURED_CANDIDATES);
    let randoms = (0..RANDOM_CANDIDATES).map(|_| random_member(&support, m, &mut rng, &pool));
    for f in structured.into_iter().chain(randoms) {
        if f.is_zero() || (d == 3 && support_non_smooth(&f.support(), m).is_some()) {
            continue;
        }
        if is_smooth(&f, budget)? == Smoothness::Smooth {
            let f = crate::expr::shrink_form(&f);
            return Ok(RepVerdict { class, status: Status::Accepted(f), invariant_support: support });
        }
    }
    Ok(RepVerdict { class, status: Status::Undecided, invariant_support: support })
}

/// Verdicts for each class, in input order. Classes are independent and are
/// decided in parallel with per-class seeds, so output does not depend on
/// scheduling.
pub fn filter_to_nd_reps(classes: Vec<RepClass>, n: usize, d: usize, budget: usize) -> Result<Vec<RepVerdict>> {
    if let Some(c) = classes.iter().find(|c| c.m != n + 2 || c.d != d) {
        return Err(Error::Dimension(format!("class in {} variables of degree {}, expected {} and {d}", c.m, c.d, n + 2)));
    }
    let Some(first) = classes.first() else { return Ok(vec![]) };
    let ch = Characters::new(&first.spec);
    let sc = Scanner::new(n + 2, d);
    if classes.iter().any(|c| c.spec != first.spec) {
        return Err(Error::Domain("classes of different groups".into()));
    }
    classes.into_par_iter().enumerate().map(|(i, c)| decide(c, (&ch, &sc), 0x5eed ^ i as u64, budget)).collect()
}

/// Outcome of filtering every class of a group.
#[derive(Clone, Debug, Default)]
pub struct Summary {
    pub classes: usize,
    pub accepted: Vec<RepVerdict>,
    pub undecided: Vec<RepVerdict>,
    /// Rejections per witness label.
    pub rejected: BTreeMap<&'static str, usize>,
}

const CHUNK: usize = 4096;

/// Enumerate and filter in chunks of classes decided in parallel, handing
/// each verdict to `visit` in enumeration order. Returns the class count.
pub fn for_each_verdict(
    spec: &AbelianSpec,
    n: usize,
    d: usize,
    budget: usize,
    mut visit: impl FnMut(RepVerdict),
) -> Result<usize> {
    let m = n + 2;
    let (ch, flat) = enumerate_columns(spec, m, d)?;
    let sc = Scanner::new(m, d);
    for (k, chunk) in flat.chunks(m * CHUNK).enumerate() {
        let verdicts: Vec<RepVerdict> = chunk
            .par_chunks(m)
            .enumerate()
            .map(|(i, cols)| decide(class_of(spec, &ch, cols, d), (&ch, &sc), 0x5eed ^ (k * CHUNK + i) as u64, budget))
            .collect::<Result<_>>()?;
        verdicts.into_iter().for_each(&mut visit);
    }
    Ok(flat.len() / m)
}

/// Enumerate and filter, keeping rejected classes only as counts.
pub fn nd_representations(spec: &AbelianSpec, n: usize, d: usize, budget: usize) -> Result<Summary> {
    let mut out = Summary::default();
    out.classes = for_each_verdict(spec, n, d, budget, |v| match &v.status {
        Status::Accepted(_) => out.accepted.push(v),
        Status::Undecided => out.undecided.push(v),
        Status::RejectedNonSmooth(w) => *out.rejected.entry(w.kind.label()).or_default() += 1,
    })?;
    Ok(out)
}

/// Exact invariance of the witness under every generator (used by tests and the CLI).
pub fn witness_is_fixed(class: &RepClass, f: &Form) -> Result<bool> {
    for g in class.generators() {
        if !crate::forms::fixes(&g, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factors() {
        assert_eq!(AbelianSpec::from_orders(&[9, 5]).unwrap().factors, vec![45]);
        assert_eq!(AbelianSpec::from_orders(&[2, 4, 3]).unwrap().factors, vec![2, 12]);
        assert!(AbelianSpec::new(vec![4, 6]).is_err());
    }

    #[test]
    fn c2_classes() {
        let spec = AbelianSpec::new(vec![2]).unwrap();
        let classes = enumerate_diagonal_reps(&spec, 7, 3).unwrap();
        assert_eq!(classes.len(), 6);
        let v = filter_to_nd_reps(classes, 5, 3, 100_000).unwrap();
        assert_eq!(v.iter().filter(|v| v.accepted()).count(), 3);
        for r in &v {
            if let Status::Accepted(f) = &r.status {
                assert!(witness_is_fixed(&r.class, f).unwrap());
            }
        }
    }

    #[test]
    fn c3_in_one_variable_is_scalar() {
        let spec = AbelianSpec::new(vec![3]).unwrap();
        assert!(enumerate_diagonal_reps(&spec, 1, 3).unwrap().is_empty());
    }

    #[test]
    fn canonical_forms() {
        let spec = AbelianSpec::new(vec![2]).unwrap();
        let a = RepClass { spec: spec.clone(), m: 4, d: 3, exp: vec![vec![1, 0, 0, 0]] };
        let b = RepClass { spec: spec.clone(), m: 4, d: 3, exp: vec![vec![0, 0, 1, 0]] };
        let c = RepClass { spec, m: 4, d: 3, exp: vec![vec![1, 1, 0, 0]] };
        assert_eq!(a.canonical(), b.canonical());
        assert_ne!(a.canonical(), c.canonical());
        // exponent scaling by an automorphism of C11 gives the same subgroup
        let s11 = AbelianSpec::new(vec![11]).unwrap();
        let r = RepClass { spec: s11.clone(), m: 7, d: 3, exp: vec![vec![9, 5, 4, 3, 1, 0, 0]] };
        let r2 = RepClass { spec: s11, m: 7, d: 3, exp: vec![vec![9 * 2 % 11, 5 * 2 % 11, 4 * 2 % 11, 3 * 2 % 11, 2, 0, 0]] };
        assert_eq!(r.canonical(), r2.canonical());
    }

    fn accepted(orders: &[u32]) -> Vec<RepVerdict> {
        let spec = AbelianSpec::from_orders(orders).unwrap();
        let s = nd_representations(&spec, 5, 3, 200_000).unwrap();
        assert!(s.undecided.is_empty());
        s.accepted
    }

    #[test]
    fn c11_unique() {
        let v = accepted(&[11]);
        assert_eq!(v.len(), 1);
        let mut e = v[0].class.exp[0].clone();
        e.sort_unstable();
        // some automorphism and twist carry it to (9,5,4,3,1,0,0)
        let target = RepClass { spec: v[0].class.spec.clone(), m: 7, d: 3, exp: vec![vec![9, 5, 4, 3, 1, 0, 0]] };
        assert_eq!(v[0].class.canonical(), target.canonical());
        assert_eq!(v[0].invariant_support.len(), 9);
    }

    #[test]
    fn c7_and_c45_unique() {
        assert_eq!(accepted(&[7]).len(), 1);
        let v = accepted(&[9, 5]);
        assert_eq!(v.len(), 1);
        if let Status::Accepted(f) = &v[0].status {
            assert!(witness_is_fixed(&v[0].class, f).unwrap());
        }
    }

    #[test]
    fn c14_has_none() {
        let spec = AbelianSpec::from_orders(&[7, 2]).unwrap();
        let classes = enumerate_diagonal_reps(&spec, 7, 3).unwrap();
        let v = filter_to_nd_reps(classes, 5, 3, 200_000).unwrap();
        assert!(!v.is_empty());
        assert!(v.iter().all(|r| matches!(r.status, Status::RejectedNonSmooth(_))));
    }
}
