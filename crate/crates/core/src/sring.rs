//! Schur rings over `Z_n`.
//!
//! An [`SRing`] is stored as its partition of `Z_n` into basic sets in
//! canonical form: every cell sorted ascending, cells ordered by their
//! minimum. Equality, ordering and hashing all go through that form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zn::{self, crt_idempotents, divisors, gcd, Section, SubgroupId};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SRing {
    n: usize,
    cells: Vec<Vec<usize>>,
    cell_of: Vec<u32>,
}

/// Wire form of an S-ring: `{"n": int, "basic_sets": [[int,...],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SRingJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub basic_sets: Vec<Vec<usize>>,
}

impl Serialize for SRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SRingJson { n: Some(self.n), basic_sets: self.cells.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SRingJson::deserialize(d)?;
        let n = raw
            .n
            .unwrap_or_else(|| raw.basic_sets.iter().map(|c| c.len()).sum());
        SRing::validate(n, raw.basic_sets).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for SRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SRing(Z_{}; {:?})", self.n, self.cells)
    }
}

impl fmt::Display for SRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{} ", self.n)?;
        let parts: Vec<String> = self
            .cells
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Orders of the subgroups that are unions of basic sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupLattice {
    pub n: usize,
    pub orders: Vec<usize>,
}

impl SubgroupLattice {
    pub fn contains(&self, d: usize) -> bool {
        self.orders.binary_search(&d).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubgroupLattice) -> bool {
        self.orders.iter().all(|&d| other.contains(d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub rank: usize,
    pub dense: bool,
    pub primitive: bool,
    pub trivial_radical: bool,
    /// Sections `U/L` with `1 < |L|`, `|U| < n` for which the S-condition holds.
    pub proper_gwp_sections: Vec<Section>,
}

fn check_partition(n: usize, partition: &[Vec<usize>]) -> Result<Vec<u32>> {
    if n == 0 {
        return Err(Error::InvalidModulus(0));
    }
    let mut cell_of = vec![u32::MAX; n];
    for (i, cell) in partition.iter().enumerate() {
        if cell.is_empty() {
            return Err(Error::MalformedPartition("empty cell".into()));
        }
        for &x in cell {
            if x >= n {
                return Err(Error::MalformedPartition(format!("{x} is not a residue mod {n}")));
            }
            if cell_of[x] != u32::MAX {
                return Err(Error::MalformedPartition(format!("{x} occurs twice")));
            }
            cell_of[x] = i as u32;
        }
    }
    if let Some(x) = cell_of.iter().position(|&c| c == u32::MAX) {
        return Err(Error::MalformedPartition(format!("{x} is not covered")));
    }
    Ok(cell_of)
}

fn canonicalize(mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in cells.iter_mut() {
        c.sort_unstable();
        c.dedup();
    }
    cells.sort_unstable_by_key(|c| c[0]);
    cells
}

impl SRing {
    /// Builds a ring from a partition already known to satisfy the axioms.
    pub(crate) fn from_partition_unchecked(n: usize, cells: Vec<Vec<usize>>) -> SRing {
        let cells = canonicalize(cells);
        let mut cell_of = vec![0u32; n];
        for (i, c) in cells.iter().enumerate() {
            for &x in c {
                cell_of[x] = i as u32;
            }
        }
        SRing { n, cells, cell_of }
    }

    /// Checks the three S-ring axioms and returns the canonical ring.
    pub fn validate(n: usize, partition: Vec<Vec<usize>>) -> Result<SRing> {
        check_partition(n, &partition)?;
        let ring = SRing::from_partition_unchecked(n, partition);
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.n;
        if self.cells[0] != [0] {
            return Err(Error::IdentityNotSingleton(self.cells[0].clone()));
        }
        for cell in &self.cells {
            let target = self.cell_of[(n - cell[0]) % n];
            let partner = &self.cells[target as usize];
            if partner.len() != cell.len() {
                return Err(Error::NotInverseClosed {
                    x: cell[0],
                    neg: (n - cell[0]) % n,
                    cell: cell.clone(),
                });
            }
            for &x in cell {
                let nx = (n - x) % n;
                if self.cell_of[nx] != target {
                    return Err(Error::NotInverseClosed { x, neg: nx, cell: cell.clone() });
                }
            }
        }
        // structure constants, by direct convolution counting
        let r = self.cells.len();
        let mut count = vec![0usize; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut checked = vec![usize::MAX; r];
        for i in 1..r {
            for j in i..r {
                let pair_id = i * r + j;
                for &x in &self.cells[i] {
                    for &y in &self.cells[j] {
                        let z = (x + y) % n;
                        if count[z] == 0 {
                            touched.push(z);
                        }
                        count[z] += 1;
                    }
                }
                let mut bad = None;
                for &z in &touched {
                    let c = self.cell_of[z] as usize;
                    if checked[c] == pair_id {
                        continue;
                    }
                    checked[c] = pair_id;
                    let expected = count[z];
                    if let Some(&w) = self.cells[c].iter().find(|&&w| count[w] != expected) {
                        bad = Some((c, z, expected, w, count[w]));
                        break;
                    }
                }
                for &z in &touched {
                    count[z] = 0;
                }
                touched.clear();
                if let Some((c, z1, c1, z2, c2)) = bad {
                    return Err(Error::StructureConstants {
                        x: self.cells[i].clone(),
                        y: self.cells[j].clone(),
                        z: self.cells[c].clone(),
                        z1,
                        c1,
                        z2,
                        c2,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.cells.len()
    }

    pub fn basic_sets(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Index of the basic set containing `x`.
    pub fn cell_index(&self, x: usize) -> usize {
        self.cell_of[x] as usize
    }

    pub fn cell_indices(&self) -> &[u32] {
        &self.cell_of
    }

    pub fn cell_of(&self, x: usize) -> &[usize] {
        &self.cells[self.cell_of[x] as usize]
    }

    /// The group ring `ZZ_n`: all basic sets are singletons.
    pub fn group_ring(n: usize) -> SRing {
        SRing::from_partition_unchecked(n, (0..n).map(|x| vec![x]).collect())
    }

    /// The rank-2 ring `{0}, Z_n \ {0}` (for `n = 1` the single cell `{0}`).
    pub fn rank2(n: usize) -> SRing {
        if n == 1 {
            return SRing::group_ring(1);
        }
        SRing::from_partition_unchecked(n, vec![vec![0], (1..n).collect()])
    }

    /// `Cyc(K, n)` for `K` generated by the given units.
    pub fn cyclotomic(n: usize, gens: &[usize]) -> Result<SRing> {
        let orbits = zn::unit_orbits(n, gens)?;
        Ok(SRing::from_partition_unchecked(n, orbits))
    }

    /// Tensor product over `Z_{n1 n2}`, combining `(a, b)` as `a e1 + b e2`
    /// with the CRT idempotents `e1, e2`.
    pub fn tensor(a: &SRing, b: &SRing) -> Result<SRing> {
        let (n1, n2) = (a.n, b.n);
        let (e1, e2) = crt_idempotents(n1, n2)?;
        let n = n1 * n2;
        let mut cells = Vec::with_capacity(a.rank() * b.rank());
        for x in &a.cells {
            for y in &b.cells {
                let mut c = Vec::with_capacity(x.len() * y.len());
                for &s in x {
                    for &t in y {
                        c.push((zn::mul_mod(s, e1, n) + zn::mul_mod(t, e2, n)) % n);
                    }
                }
                cells.push(c);
            }
        }
        Ok(SRing::from_partition_unchecked(n, cells))
    }

    /// Tensor product placed on the subgroups of orders `a.n` and `b.n` of
    /// `Z_{a.n b.n}` through the canonical embeddings `k -> k n/m`.
    pub fn tensor_on_subgroups(a: &SRing, b: &SRing) -> Result<SRing> {
        let (n1, n2) = (a.n, b.n);
        if gcd(n1, n2) != 1 {
            return Err(Error::NotCoprime(n1, n2));
        }
        let n = n1 * n2;
        let mut cells = Vec::with_capacity(a.rank() * b.rank());
        for x in &a.cells {
            for y in &b.cells {
                let mut c = Vec::with_capacity(x.len() * y.len());
                for &s in x {
                    for &t in y {
                        c.push((s * n2 + t * n1) % n);
                    }
                }
                cells.push(c);
            }
        }
        Ok(SRing::from_partition_unchecked(n, cells))
    }

    /// Generalized wreath product: `a1` over `Z_u` glued with `a2` over
    /// `Z_{n/l}` along the section `U/L`.
    pub fn generalized_wreath(a1: &SRing, a2: &SRing, sec: Section) -> Result<SRing> {
        let Section { n, u, l } = sec;
        if a1.n != u || a2.n != n / l {
            return Err(Error::ShapeMismatch(format!(
                "expected rings over Z_{u} and Z_{}, got Z_{} and Z_{}",
                n / l,
                a1.n,
                a2.n
            )));
        }
        let m = u / l;
        let left = a1.section_ring(Section::new(u, u, l)?)?;
        let right = a2.section_ring(Section::new(n / l, m, 1)?)?;
        if left != right {
            return Err(Error::SectionMismatch { left: left.cells, right: right.cells });
        }
        let step = n / u;
        let q = n / l;
        let mut cells: Vec<Vec<usize>> = a1
            .cells
            .iter()
            .map(|c| c.iter().map(|&a| a * step).collect())
            .collect();
        // the image of U in Z_{n/l} is the set of multiples of n/u
        for c in &a2.cells {
            if c[0] % step == 0 {
                continue;
            }
            let mut pre = Vec::with_capacity(c.len() * l);
            for &y in c {
                for k in 0..l {
                    pre.push(y + k * q);
                }
            }
            cells.push(pre);
        }
        SRing::validate(n, cells)
    }

    /// `A_S` for an A-section `S = U/L`, as a ring over `Z_{u/l}`.
    pub fn section_ring(&self, sec: Section) -> Result<SRing> {
        if sec.n != self.n {
            return Err(Error::ShapeMismatch(format!(
                "section of Z_{} applied to a ring over Z_{}",
                sec.n, self.n
            )));
        }
        if !self.is_subgroup(sec.u) || !self.is_subgroup(sec.l) {
            return Err(Error::NotASection { n: sec.n, u: sec.u, l: sec.l });
        }
        let m = sec.order();
        let mut images: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &self.cells {
            if !sec.contains(c[0]) {
                continue;
            }
            let mut img: Vec<usize> = c.iter().map(|&g| sec.project(g).expect("inside U")).collect();
            img.sort_unstable();
            img.dedup();
            images.insert(img);
        }
        let cells: Vec<Vec<usize>> = images.into_iter().collect();
        if check_partition(m, &cells).is_err() {
            return Err(Error::Internal(format!(
                "images of basic sets do not partition the section {}/{}",
                sec.u, sec.l
            )));
        }
        Ok(SRing::from_partition_unchecked(m, cells))
    }

    /// Restriction `A_U` to the subgroup of order `u`.
    pub fn restriction(&self, u: usize) -> Result<SRing> {
        self.section_ring(Section::new(self.n, u, 1)?)
    }

    /// Quotient `A_{G/L}` by the subgroup of order `l`.
    pub fn quotient(&self, l: usize) -> Result<SRing> {
        self.section_ring(Section::new(self.n, self.n, l)?)
    }

    /// True iff the subgroup of order `d` is a union of basic sets.
    pub fn is_subgroup(&self, d: usize) -> bool {
        if d == 0 || self.n % d != 0 {
            return false;
        }
        let step = self.n / d;
        (0..d).all(|k| self.cell_of(k * step).iter().all(|x| x % step == 0))
    }

    pub fn subgroup_lattice(&self) -> SubgroupLattice {
        let orders = divisors(self.n).into_iter().filter(|&d| self.is_subgroup(d)).collect();
        SubgroupLattice { n: self.n, orders }
    }

    /// The radical: `rad(X)` for any basic set `X` containing a generator,
    /// verified to be independent of the choice.
    pub fn radical(&self) -> Result<SubgroupId> {
        let n = self.n;
        let mut found: Option<SubgroupId> = None;
        for c in &self.cells {
            if !c.iter().any(|&x| n == 1 || gcd(x, n) == 1) {
                continue;
            }
            let r = radical_of_set(n, c);
            match found {
                None => found = Some(r),
                Some(prev) if prev != r => return Err(Error::RadicalInconsistent(prev.d, r.d)),
                _ => {}
            }
        }
        found.ok_or_else(|| Error::Internal("no basic set contains a generator".into()))
    }

    /// Whether every basic set outside `U` is a union of `L`-cosets.
    pub fn satisfies_s_condition(&self, u: usize, l: usize) -> bool {
        if !self.is_subgroup(u) || !self.is_subgroup(l) || u % l != 0 {
            return false;
        }
        let n = self.n;
        let ustep = n / u;
        let lstep = n / l;
        (0..n)
            .filter(|x| x % ustep != 0)
            .all(|x| self.cell_of[x] == self.cell_of[(x + lstep) % n])
    }

    pub fn classify(&self) -> Result<Classification> {
        let lattice = self.subgroup_lattice();
        let n = self.n;
        let rad = self.radical()?;
        let mut proper = Vec::new();
        for &u in &lattice.orders {
            if u == n {
                continue;
            }
            for &l in &lattice.orders {
                if l == 1 || u % l != 0 {
                    continue;
                }
                if self.satisfies_s_condition(u, l) {
                    proper.push(Section { n, u, l });
                }
            }
        }
        Ok(Classification {
            rank: self.rank(),
            dense: lattice.orders.len() == divisors(n).len(),
            primitive: lattice.orders.len() <= 2,
            trivial_radical: rad.d == 1,
            proper_gwp_sections: proper,
        })
    }

    /// `self <= other`: every basic set of `self` is a union of basic sets of `other`.
    pub fn is_coarsening_of(&self, other: &SRing) -> bool {
        self.n == other.n
            && other
                .cells
                .iter()
                .all(|c| c.iter().all(|&x| self.cell_of[x] == self.cell_of[c[0]]))
    }

    /// The image of the ring under the multiplier `x -> m x`, `m` a unit.
    pub fn multiplier_image(&self, m: usize) -> Result<SRing> {
        let n = self.n;
        if n > 1 && gcd(m % n, n) != 1 {
            return Err(Error::NotAUnit { n, g: m });
        }
        let cells = self
            .cells
            .iter()
            .map(|c| c.iter().map(|&x| zn::mul_mod(x, m, n)).collect())
            .collect();
        Ok(SRing::from_partition_unchecked(n, cells))
    }

    /// Units `m` with `m X = X` for every basic set `X`.
    pub fn fixing_multipliers(&self) -> Vec<usize> {
        let n = self.n;
        zn::units(n)
            .into_iter()
            .filter(|&m| {
                (0..n).all(|x| self.cell_of[zn::mul_mod(x, m, n)] == self.cell_of[x])
            })
            .collect()
    }

    pub fn to_json(&self) -> SRingJson {
        SRingJson { n: Some(self.n), basic_sets: self.cells.clone() }
    }
}

/// `rad(X)`: the largest subgroup `H` with `H + X = X`, by its order.
pub fn radical_of_set(n: usize, x: &[usize]) -> SubgroupId {
    let set: BTreeSet<usize> = x.iter().copied().collect();
    let d = divisors(n)
        .into_iter()
        .rev()
        .find(|&d| {
            let step = n / d;
            set.iter().all(|&g| set.contains(&((g + step) % n)))
        })
        .unwrap_or(1);
    SubgroupId { n, d }
}

/// Groups rings by equality; used to match section rings in bulk.
pub fn index_by<K: Ord + Clone>(rings: &[SRing], key: impl Fn(&SRing) -> Option<K>) -> BTreeMap<K, Vec<usize>> {
    let mut out: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (i, r) in rings.iter().enumerate() {
        if let Some(k) = key(r) {
            out.entry(k).or_default().push(i);
        }
    }
    out
}
