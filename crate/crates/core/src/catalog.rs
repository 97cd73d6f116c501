//! Enumeration of circulant S-rings, an exhaustive oracle for small `n`,
//! schurity sweeps, and the non-schurian family over `Z_{p^2 p3 p4}`.
//!
//! [`enumerate_srings`] builds the catalog of every divisor bottom-up:
//! seeds are the cyclotomic rings and `rank2(Z_m)`, closed under tensor
//! products over coprime splittings and generalized wreath products over
//! all sections whose section rings match.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{self, AutOptions};
use crate::sring::SRing;
use crate::zn::{self, divisors, gcd, is_prime, Section};

pub const BRUTE_FORCE_LIMIT: usize = 13;
pub const DEFAULT_ENTRY_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    /// `Cyc(K, Z_n)` with `|K| = k`.
    Cyclotomic { k: usize },
    Rank2,
    Tensor { factors: [usize; 2] },
    Gwp { section: Section },
    /// Found by exhaustive search.
    Exhaustive,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub n: usize,
    entries: BTreeMap<SRing, Provenance>,
}

/// One line of a catalog file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogLine {
    pub n: usize,
    pub basic_sets: Vec<Vec<usize>>,
    pub provenance: Provenance,
}

impl Catalog {
    fn new(n: usize) -> Catalog {
        Catalog { n, entries: BTreeMap::new() }
    }

    fn insert(&mut self, ring: SRing, prov: Provenance) -> bool {
        if self.entries.contains_key(&ring) {
            return false;
        }
        self.entries.insert(ring, prov);
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, a: &SRing) -> bool {
        self.entries.contains_key(a)
    }

    pub fn provenance(&self, a: &SRing) -> Option<&Provenance> {
        self.entries.get(a)
    }

    /// Entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = &SRing> {
        self.entries.keys()
    }

    pub fn rings(&self) -> Vec<SRing> {
        self.entries.keys().cloned().collect()
    }

    pub fn same_rings(&self, other: &Catalog) -> bool {
        self.n == other.n && self.entries.keys().eq(other.entries.keys())
    }

    /// Whether `m A` is in the catalog for every entry `A` and unit `m`.
    pub fn closed_under_multipliers(&self) -> bool {
        let units = zn::units(self.n);
        self.entries.keys().all(|a| {
            units.iter().all(|&m| a.multiplier_image(m).map(|b| self.contains(&b)).unwrap_or(false))
        })
    }

    /// One representative per multiplier orbit (the least in canonical order).
    pub fn multiplier_classes(&self) -> Vec<SRing> {
        let units = zn::units(self.n);
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        for a in self.entries.keys() {
            if seen.contains(a) {
                continue;
            }
            reps.push(a.clone());
            for &m in &units {
                if let Ok(b) = a.multiplier_image(m) {
                    seen.insert(b);
                }
            }
        }
        reps
    }

    pub fn lines(&self) -> Vec<CatalogLine> {
        self.entries
            .iter()
            .map(|(a, p)| CatalogLine { n: self.n, basic_sets: a.basic_sets().to_vec(), provenance: p.clone() })
            .collect()
    }

    /// JSON-lines form, one ring per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for line in self.lines() {
            out.push_str(&serde_json::to_string(&line).expect("catalog lines serialize"));
            out.push('\n');
        }
        out
    }
}

/// All S-rings over `Z_n` by exhaustive search over inverse-closed partitions.
pub fn brute_force_srings(n: usize) -> Result<Catalog> {
    if n == 0 {
        return Err(Error::InvalidModulus(0));
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::ModulusTooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut cat = Catalog::new(n);
    // elements x <= n/2 with their negatives; cells come in partner pairs
    let atoms: Vec<usize> = (1..=n / 2).collect();
    let mut cells: Vec<Vec<usize>> = vec![vec![0]];
    let mut partner: Vec<usize> = vec![0];
    place(n, &atoms, 0, &mut cells, &mut partner, &mut cat);
    Ok(cat)
}

fn place(
    n: usize,
    atoms: &[usize],
    i: usize,
    cells: &mut Vec<Vec<usize>>,
    partner: &mut Vec<usize>,
    cat: &mut Catalog,
) {
    if i == atoms.len() {
        if let Ok(a) = SRing::validate(n, cells.clone()) {
            cat.insert(a, Provenance::Exhaustive);
        }
        return;
    }
    let x = atoms[i];
    let nx = n - x;
    let self_inverse = x == nx;
    for c in 1..cells.len() {
        let p = partner[c];
        if self_inverse && p != c {
            continue;
        }
        cells[c].push(x);
        if !self_inverse {
            cells[p].push(nx);
        }
        place(n, atoms, i + 1, cells, partner, cat);
        if !self_inverse {
            cells[p].pop();
        }
        cells[c].pop();
    }
    // a new symmetric cell
    let k = cells.len();
    cells.push(if self_inverse { vec![x] } else { vec![x, nx] });
    partner.push(k);
    place(n, atoms, i + 1, cells, partner, cat);
    cells.pop();
    partner.pop();
    // a new pair of mutually inverse cells
    if !self_inverse {
        cells.push(vec![x]);
        cells.push(vec![nx]);
        partner.push(k + 1);
        partner.push(k);
        place(n, atoms, i + 1, cells, partner, cat);
        cells.truncate(k);
        partner.truncate(k);
    }
}

/// Memoized bottom-up enumerator; catalogs of smaller divisors are reused.
#[derive(Debug)]
pub struct Enumerator {
    budget: usize,
    memo: BTreeMap<usize, Catalog>,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator::new(DEFAULT_ENTRY_BUDGET)
    }
}

impl Enumerator {
    /// `budget` caps the number of entries of any single catalog.
    pub fn new(budget: usize) -> Enumerator {
        Enumerator { budget, memo: BTreeMap::new() }
    }

    pub fn catalog(&mut self, n: usize) -> Result<&Catalog> {
        if n == 0 {
            return Err(Error::InvalidModulus(0));
        }
        for m in divisors(n) {
            if !self.memo.contains_key(&m) {
                let cat = self.build(m)?;
                self.memo.insert(m, cat);
            }
        }
        Ok(&self.memo[&n])
    }

    fn check_budget(&self, cat: &Catalog) -> Result<()> {
        if cat.len() > self.budget {
            return Err(Error::EnumerationBudget(format!(
                "more than {} S-rings over Z_{}",
                self.budget, cat.n
            )));
        }
        Ok(())
    }

    fn build(&self, m: usize) -> Result<Catalog> {
        let mut cat = Catalog::new(m);
        for k in zn::unit_subgroups(m) {
            let a = SRing::cyclotomic(m, &k)?;
            cat.insert(a, Provenance::Cyclotomic { k: k.len() });
        }
        cat.insert(SRing::rank2(m), Provenance::Rank2);
        for a in divisors(m) {
            let b = m / a;
            if a == 1 || a >= b || gcd(a, b) != 1 {
                continue;
            }
            for x in self.memo[&a].entries() {
                for y in self.memo[&b].entries() {
                    cat.insert(SRing::tensor(x, y)?, Provenance::Tensor { factors: [a, b] });
                }
            }
            self.check_budget(&cat)?;
        }
        for u in divisors(m) {
            if u == m {
                continue;
            }
            for l in divisors(u) {
                if l == 1 {
                    continue;
                }
                let sec = Section { n: m, u, l };
                self.gwp_closure(&mut cat, sec)?;
                self.check_budget(&cat)?;
            }
        }
        Ok(cat)
    }

    fn gwp_closure(&self, cat: &mut Catalog, sec: Section) -> Result<()> {
        let Section { n, u, l } = sec;
        let q = n / l;
        let s = u / l;
        let mut left: BTreeMap<SRing, Vec<&SRing>> = BTreeMap::new();
        for a1 in self.memo[&u].entries().filter(|a| a.is_subgroup(l)) {
            left.entry(a1.section_ring(Section::new(u, u, l)?)?).or_default().push(a1);
        }
        for a2 in self.memo[&q].entries().filter(|a| a.is_subgroup(s)) {
            let key = a2.section_ring(Section::new(q, s, 1)?)?;
            if let Some(lefts) = left.get(&key) {
                for a1 in lefts {
                    cat.insert(SRing::generalized_wreath(a1, a2, sec)?, Provenance::Gwp { section: sec });
                }
            }
        }
        Ok(())
    }
}

/// The catalog of all S-rings over `Z_n` built by [`Enumerator`].
pub fn enumerate_srings(n: usize) -> Result<Catalog> {
    enumerate_srings_with(n, DEFAULT_ENTRY_BUDGET)
}

pub fn enumerate_srings_with(n: usize, budget: usize) -> Result<Catalog> {
    let mut e = Enumerator::new(budget);
    Ok(e.catalog(n)?.clone())
}

/// Structural facts about one proper gwp section of a non-schurian ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwpFacts {
    pub section: Section,
    pub lower_prime: bool,
    pub top_prime: bool,
    pub section_order_not_4: bool,
    pub restriction_not_wreath: bool,
    pub quotient_not_wreath: bool,
    /// `A_U` and `A_{G/L}` are not both normal.
    pub not_both_normal: bool,
    /// `A_{U/L} = A_{H/L} wr A_{U/H}` for some `L < H < U`.
    pub section_is_wreath: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonSchurianEntry {
    pub basic_sets: Vec<Vec<usize>>,
    pub sections: Vec<GwpFacts>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub omega: u32,
    pub entries: usize,
    pub schurian: usize,
    pub nonschurian: Vec<NonSchurianEntry>,
}

/// Whether `a` is a proper wreath product: some nontrivial proper
/// A-subgroup `H` with every basic set outside `H` a union of `H`-cosets.
pub fn is_proper_wreath(a: &SRing) -> bool {
    let n = a.n();
    a.subgroup_lattice().orders.iter().any(|&h| h != 1 && h != n && a.satisfies_s_condition(h, h))
}

fn gwp_facts(a: &SRing, sec: Section, opts: AutOptions) -> Result<GwpFacts> {
    let Section { n, u, l } = sec;
    let a_u = a.restriction(u)?;
    let a_q = a.quotient(l)?;
    let a_s = a.section_ring(sec)?;
    let both_normal = scheme::is_normal_with(&a_u, opts)? && scheme::is_normal_with(&a_q, opts)?;
    Ok(GwpFacts {
        section: sec,
        lower_prime: is_prime(l),
        top_prime: is_prime(n / u),
        section_order_not_4: sec.order() != 4,
        restriction_not_wreath: !is_proper_wreath(&a_u),
        quotient_not_wreath: !is_proper_wreath(&a_q),
        not_both_normal: !both_normal,
        section_is_wreath: is_proper_wreath(&a_s),
    })
}

/// Schurity of every catalog entry for each `n`, entries tested in parallel
/// on `jobs` threads (`0` picks the rayon default).
pub fn schurity_sweep(ns: &[usize], opts: AutOptions, jobs: usize) -> Result<Vec<SweepReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let mut en = Enumerator::default();
    let mut reports = Vec::with_capacity(ns.len());
    for &n in ns {
        let rings = en.catalog(n)?.rings();
        let results: Vec<Result<Option<NonSchurianEntry>>> = pool.install(|| {
            rings
                .par_iter()
                .map(|a| {
                    if scheme::is_schurian_with(a, opts)? {
                        return Ok(None);
                    }
                    let sections = a
                        .classify()?
                        .proper_gwp_sections
                        .into_iter()
                        .map(|s| gwp_facts(a, s, opts))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Some(NonSchurianEntry { basic_sets: a.basic_sets().to_vec(), sections }))
                })
                .collect()
        });
        let mut nonschurian = Vec::new();
        for r in results {
            if let Some(e) = r? {
                nonschurian.push(e);
            }
        }
        reports.push(SweepReport {
            n,
            omega: zn::omega(n),
            entries: rings.len(),
            schurian: rings.len() - nonschurian.len(),
            nonschurian,
        });
    }
    Ok(reports)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example12Params {
    pub p: usize,
    pub p3: usize,
    pub p4: usize,
    pub d: usize,
    /// Choose distinct order-`d` isomorphisms for `M1` and `M2`.
    pub distinct: bool,
}

impl Example12Params {
    pub fn minimal() -> Example12Params {
        Example12Params { p: 5, p3: 11, p4: 13, d: 4, distinct: true }
    }

    pub fn validate(&self) -> Result<()> {
        let Example12Params { p, p3, p4, d, .. } = *self;
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        for q in [p, p3, p4] {
            if !is_prime(q) {
                return bad(format!("{q} is not prime"));
            }
        }
        if p == p4 || p3 == p4 {
            return bad(format!("p4 = {p4} must differ from p and p3"));
        }
        if (p3 - 1) % p != 0 {
            return bad(format!("p = {p} does not divide p3 - 1 = {}", p3 - 1));
        }
        if d < 3 || (p - 1) % d != 0 || (p4 - 1) % d != 0 {
            return bad(format!("d = {d} must be at least 3 and divide p - 1 and p4 - 1"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.p * self.p * self.p3 * self.p4
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example12 {
    pub params: Example12Params,
    /// Generator of `M` in `Aut(Z_{p^2 p3})`.
    pub m_gen: usize,
    /// Generators of `M1`, `M2` in `Aut(Z_{p p4})`.
    pub m1_gen: usize,
    pub m2_gen: usize,
    /// Set when `M1 = M2`; the non-schurity certificate is not expected then.
    pub equal_factors: bool,
    pub a1: SRing,
    pub a2: SRing,
    pub ring: SRing,
    /// The gluing section `U/L` of orders `(p^2 p3, p3)`.
    pub section: Section,
}

/// Units of `Z_m` of multiplicative order `k`, ascending.
fn units_of_order(m: usize, k: usize) -> Vec<usize> {
    zn::units(m).into_iter().filter(|&g| zn::unit_order(g, m).ok() == Some(k)).collect()
}

pub fn example12(params: Example12Params) -> Result<Example12> {
    params.validate()?;
    let Example12Params { p, p3, p4, d, distinct } = params;
    let pp = p * p;
    let missing = |what: &str| Error::InvalidParameters(format!("no {what}"));
    let a = *units_of_order(pp, p * d).first().ok_or_else(|| missing("unit of order pd mod p^2"))?;
    let b = *units_of_order(p3, p).first().ok_or_else(|| missing("unit of order p mod p3"))?;
    let c = *units_of_order(p, d).first().ok_or_else(|| missing("unit of order d mod p"))?;
    let r = units_of_order(p4, d);
    let (e1, e2) = match (r.first(), r.get(1)) {
        (Some(&e1), Some(&e2)) => (e1, if distinct { e2 } else { e1 }),
        _ => return Err(missing("two units of order d mod p4")),
    };
    let m_gen = zn::crt(a, pp, b, p3)?;
    let m1_gen = zn::crt(c, p, e1, p4)?;
    let m2_gen = zn::crt(c, p, e2, p4)?;
    let a1 = SRing::cyclotomic(pp * p3, &[m_gen])?;
    let c1 = SRing::cyclotomic(p * p4, &[m1_gen])?;
    let c2 = SRing::cyclotomic(p * p4, &[m2_gen])?;
    let a2 = SRing::generalized_wreath(&c1, &c2, Section::new(pp * p4, p * p4, p)?)?;
    let cyc = SRing::cyclotomic(p, &[c])?;
    let target = SRing::generalized_wreath(&cyc, &cyc, Section::new(pp, p, p)?)?;
    let top = a1.section_ring(Section::new(pp * p3, pp * p3, p3)?)?;
    let bottom = a2.restriction(pp)?;
    if top != target || bottom != target {
        return Err(Error::Internal("section rings of the factors are not Cyc(d,p) wr Cyc(d,p)".into()));
    }
    let section = Section::new(params.n(), pp * p3, p3)?;
    let ring = SRing::generalized_wreath(&a1, &a2, section)?;
    Ok(Example12 { params, m_gen, m1_gen, m2_gen, equal_factors: !distinct, a1, a2, ring, section })
}
