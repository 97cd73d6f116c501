//! Permutation groups on `{0, ..., m-1}`.
//!
//! Permutations act on the right: `p.then(q)` applies `p` first. Groups keep
//! their generators and build a stabilizer chain on demand.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zn::{self, Section};

pub const DEFAULT_INTERSECTION_THRESHOLD: u64 = 1_000_000;
pub const DEFAULT_LIFT_THRESHOLD: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl Perm {
    pub fn identity(m: usize) -> Perm {
        Perm((0..m as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x >= m || seen[x] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images.into_iter().map(|x| x as u32).collect()))
    }

    /// Builds a permutation from a map known to be bijective.
    pub fn from_fn(m: usize, f: impl Fn(usize) -> usize) -> Perm {
        Perm((0..m).map(|x| f(x) as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    /// `self` followed by the inverse of `other`.
    pub fn then_inverse(&self, other: &Perm) -> Perm {
        other.inverse_then_apply(self)
    }

    fn inverse_then_apply(&self, first: &Perm) -> Perm {
        let inv = self.inverse();
        first.then(&inv)
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i)
    }

    /// Conjugate `other^-1 self other`.
    pub fn conjugate_by(&self, other: &Perm) -> Perm {
        other.inverse().then(self).then(other)
    }

    /// Restriction to the first `m` points, assumed invariant.
    pub fn truncate(&self, m: usize) -> Perm {
        Perm(self.0[..m].to_vec())
    }
}

struct Level {
    point: usize,
    orbit: Vec<usize>,
    pos: Vec<u32>,
    reps: Vec<Perm>,
    gens: Vec<usize>,
    /// per entry of `gens`: orbit points whose Schreier generator was sifted
    done: Vec<usize>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Level {
        let mut pos = vec![u32::MAX; degree];
        pos[point] = 0;
        Level {
            point,
            orbit: vec![point],
            pos,
            reps: vec![Perm::identity(degree)],
            gens: Vec::new(),
            done: Vec::new(),
        }
    }

    fn extend_orbit(&mut self, all: &[Perm]) {
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for &g in &self.gens {
                let y = all[g].apply(x);
                if self.pos[y] == u32::MAX {
                    self.pos[y] = self.orbit.len() as u32;
                    let rep = self.reps[i].then(&all[g]);
                    self.orbit.push(y);
                    self.reps.push(rep);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set, built by incremental Schreier-Sims.
pub struct StabChain {
    degree: usize,
    gens: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm], base_prefix: &[usize]) -> StabChain {
        let mut chain = StabChain { degree, gens: Vec::new(), levels: Vec::new() };
        for &b in base_prefix {
            chain.levels.push(Level::new(b, degree));
        }
        for g in gens {
            chain.extend(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    pub fn in_basic_orbit(&self, level: usize, x: usize) -> bool {
        self.levels[level].pos[x] != u32::MAX
    }

    /// Generators of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Perm> {
        if k >= self.levels.len() {
            return Vec::new();
        }
        self.levels[k].gens.iter().map(|&g| self.gens[g].clone()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Order of the pointwise stabilizer of the first `k` base points.
    pub fn order_from(&self, k: usize) -> BigUint {
        self.levels[k.min(self.levels.len())..]
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Sifts `h` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it passed every level).
    fn sift(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.apply(level.point);
            let p = level.pos[beta];
            if p == u32::MAX {
                return (h, l);
            }
            if beta != level.point {
                h = h.then_inverse(&level.reps[p as usize]);
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && {
            let (r, _) = self.sift(g.clone(), 0);
            r.is_identity()
        }
    }

    fn add_strong(&mut self, r: Perm, depth: usize, checked_upto: Option<usize>) {
        if depth == self.levels.len() {
            let p = r.first_moved().expect("nontrivial residue");
            self.levels.push(Level::new(p, self.degree));
        }
        let idx = self.gens.len();
        self.gens.push(r);
        for l in 0..=depth {
            let level = &mut self.levels[l];
            level.gens.push(idx);
            match checked_upto {
                Some(i) if l <= i => level.done.push(usize::MAX),
                _ => level.done.push(0),
            }
        }
        for l in 0..=depth {
            if checked_upto.is_none_or(|i| l > i) {
                self.levels[l].extend_orbit(&self.gens);
            }
        }
    }

    /// Adds a generator; returns false if it was already in the group.
    pub fn extend(&mut self, g: &Perm) -> bool {
        assert_eq!(g.degree(), self.degree, "degree mismatch");
        let (r, j) = self.sift(g.clone(), 0);
        if r.is_identity() {
            return false;
        }
        self.add_strong(r, j, None);
        self.complete(j);
        true
    }

    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            let l = i as usize;
            let mut found = None;
            'scan: for t in 0..self.levels[l].gens.len() {
                loop {
                    let (b, gi) = {
                        let level = &self.levels[l];
                        let b = level_done(level, t);
                        if b >= level.orbit.len() {
                            break;
                        }
                        (b, level.gens[t])
                    };
                    self.levels[l].done[t] = b + 1;
                    let h = self.levels[l].reps[b].then(&self.gens[gi]);
                    let (r, j) = self.sift(h, l);
                    if !r.is_identity() {
                        found = Some((r, j));
                        break 'scan;
                    }
                }
            }
            match found {
                Some((r, j)) => {
                    self.add_strong(r, j, Some(l));
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    /// All group elements, in a fixed order. Intended for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for g in &out {
                for rep in &level.reps {
                    next.push(g.then(rep));
                }
            }
            out = next;
        }
        out
    }
}

fn level_done(level: &Level, t: usize) -> usize {
    level.done[t].min(level.orbit.len())
}

/// Wire form of a group: `{"degree": m, "generators": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermGroupJson {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup::new(self.degree, self.gens.clone()).expect("already validated")
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.gens.len())
            .finish()
    }
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PermGroupJson::deserialize(d)?;
        PermGroup::from_json(raw).map_err(serde::de::Error::custom)
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<PermGroup> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup { degree, gens, chain: OnceLock::new() })
    }

    /// A group whose stabilizer chain is already known.
    pub fn with_chain(degree: usize, gens: Vec<Perm>, chain: StabChain) -> Result<PermGroup> {
        let out = PermGroup::new(degree, gens)?;
        let _ = out.chain.set(chain);
        Ok(out)
    }

    pub fn from_json(raw: PermGroupJson) -> Result<PermGroup> {
        let gens = raw
            .generators
            .into_iter()
            .map(Perm::from_images)
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(raw.degree, gens)
    }

    pub fn to_json(&self) -> PermGroupJson {
        PermGroupJson { degree: self.degree, generators: self.gens.iter().map(|g| g.images()).collect() }
    }

    pub fn trivial(m: usize) -> PermGroup {
        PermGroup::new(m, Vec::new()).unwrap()
    }

    /// Translations `x -> x + 1` of `Z_m`.
    pub fn translations(m: usize) -> PermGroup {
        PermGroup::new(m, vec![translation(m, 1)]).unwrap()
    }

    pub fn symmetric(m: usize) -> PermGroup {
        let mut gens = Vec::new();
        if m >= 2 {
            gens.push(Perm::from_fn(m, |x| if x < 2 { 1 - x } else { x }));
        }
        if m >= 3 {
            gens.push(Perm::from_fn(m, |x| (x + 1) % m));
        }
        PermGroup::new(m, gens).unwrap()
    }

    /// `Hol(Z_m)`: translations together with the multipliers.
    pub fn holomorph(m: usize) -> PermGroup {
        let mut gens = vec![translation(m, 1)];
        for g in zn::unit_group_generators(m) {
            gens.push(multiplier(m, g));
        }
        PermGroup::new(m, gens).unwrap()
    }

    /// Translations plus the given multipliers.
    pub fn affine(m: usize, units: &[usize]) -> PermGroup {
        let mut gens = vec![translation(m, 1)];
        for &g in units {
            gens.push(multiplier(m, g));
        }
        PermGroup::new(m, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::new(self.degree, &self.gens, &[]))
    }

    pub fn chain_with_base(&self, prefix: &[usize]) -> StabChain {
        StabChain::new(self.degree, &self.gens, prefix)
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// The order as `u64`, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        let digits = self.order().to_u64_digits();
        match digits.len() {
            0 => Some(0),
            1 => Some(digits[0]),
            _ => None,
        }
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    pub fn equals(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// Group generated by `self` and `other`.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        PermGroup::new(self.degree, gens)
    }

    /// A generating set without redundant generators (by sifting in order).
    pub fn reduced(&self) -> PermGroup {
        let mut chain = StabChain::new(self.degree, &[], &[]);
        let mut kept = Vec::new();
        for g in &self.gens {
            if chain.extend(g) {
                kept.push(g.clone());
            }
        }
        let out = PermGroup::new(self.degree, kept).unwrap();
        let _ = out.chain.set(chain);
        out
    }

    pub fn elements(&self) -> Vec<Perm> {
        self.chain().elements()
    }

    /// Orbits on points, each sorted, ordered by minimum.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.gens)
    }

    /// Orbits of the stabilizer of `point`.
    pub fn stabilizer_orbits(&self, point: usize) -> Vec<Vec<usize>> {
        let chain = self.chain_with_base(&[point]);
        orbits_of(self.degree, &chain.stabilizer_generators(1))
    }

    /// Class labels of the orbits on ordered pairs, indexed by `x * m + y`,
    /// numbered by first occurrence.
    pub fn two_orbits(&self) -> Vec<u32> {
        let m = self.degree;
        let mut uf = UnionFind::new(m * m);
        for g in &self.gens {
            for x in 0..m {
                let gx = g.apply(x);
                for y in 0..m {
                    uf.union(x * m + y, gx * m + g.apply(y));
                }
            }
        }
        uf.labels()
    }

    pub fn two_equivalent(&self, other: &PermGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(self.two_orbits() == other.two_orbits())
    }

    /// Subgroup fixing every block of an invariant partition.
    pub fn kernel_on_blocks(&self, blocks: &[Vec<usize>]) -> Result<PermGroup> {
        let m = self.degree;
        let block_of = block_index(m, blocks)?;
        let b = blocks.len();
        let mut ext_gens = Vec::with_capacity(self.gens.len());
        for (i, g) in self.gens.iter().enumerate() {
            let mut images: Vec<usize> = g.images();
            for blk in blocks {
                let target = block_of[g.apply(blk[0])];
                if blk.iter().any(|&x| block_of[g.apply(x)] != target) {
                    return Err(Error::NotInvariant(i));
                }
                images.push(m + target);
            }
            ext_gens.push(Perm::from_images(images)?);
        }
        let prefix: Vec<usize> = (m..m + b).collect();
        let chain = StabChain::new(m + b, &ext_gens, &prefix);
        let gens = chain.stabilizer_generators(b).iter().map(|g| g.truncate(m)).collect();
        PermGroup::new(m, gens)
    }

    /// Setwise stabilizer of the block containing `point` in an invariant
    /// block system, through Schreier generators of the block action.
    pub fn block_stabilizer(&self, blocks: &[Vec<usize>], point: usize) -> Result<PermGroup> {
        let m = self.degree;
        let block_of = block_index(m, blocks)?;
        for (i, g) in self.gens.iter().enumerate() {
            for blk in blocks {
                let t = block_of[g.apply(blk[0])];
                if blk.iter().any(|&x| block_of[g.apply(x)] != t) {
                    return Err(Error::NotInvariant(i));
                }
            }
        }
        let start = block_of[point];
        let mut reps: HashMap<usize, Perm> = HashMap::new();
        reps.insert(start, Perm::identity(m));
        let mut queue = vec![start];
        let mut i = 0;
        while i < queue.len() {
            let blk = queue[i];
            let rep = reps[&blk].clone();
            for g in &self.gens {
                let img = block_of[g.apply(blocks[blk][0])];
                if let std::collections::hash_map::Entry::Vacant(e) = reps.entry(img) {
                    e.insert(rep.then(g));
                    queue.push(img);
                }
            }
            i += 1;
        }
        let mut chain = StabChain::new(m, &[], &[]);
        let mut gens = Vec::new();
        for &blk in &queue {
            for g in &self.gens {
                let img = block_of[g.apply(blocks[blk][0])];
                let h = reps[&blk].then(g).then_inverse(&reps[&img]);
                if chain.extend(&h) {
                    gens.push(h);
                }
            }
        }
        let out = PermGroup::new(m, gens)?;
        let _ = out.chain.set(chain);
        Ok(out)
    }

    /// Action on `U/L` of the setwise stabilizer of `U`, as a group on `Z_{u/l}`.
    pub fn induced_on_section(&self, sec: Section) -> Result<PermGroup> {
        check_section_invariant(self, sec)?;
        let n = sec.n;
        let stab = if sec.u == n {
            self.clone()
        } else {
            self.block_stabilizer(&coset_blocks(n, sec.u), 0)?
        };
        let m = sec.order();
        let mut chain = StabChain::new(m, &[], &[]);
        let mut gens = Vec::new();
        for g in stab.generators() {
            let p = induced_perm(g, sec);
            if chain.extend(&p) {
                gens.push(p);
            }
        }
        let out = PermGroup::new(m, gens)?;
        let _ = out.chain.set(chain);
        Ok(out)
    }

    pub fn intersect(&self, other: &PermGroup, threshold: u64) -> Result<PermGroup> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let (small, large) = if self.order() <= other.order() { (self, other) } else { (other, self) };
        if small.order() > BigUint::from(threshold) {
            return Err(Error::IntersectionThreshold(threshold as usize));
        }
        let big = large.chain();
        let mut chain = StabChain::new(self.degree, &[], &[]);
        let mut gens = Vec::new();
        for g in small.elements() {
            if !chain.contains(&g) && big.contains(&g) {
                chain.extend(&g);
                gens.push(g);
            }
        }
        let out = PermGroup::new(self.degree, gens)?;
        let _ = out.chain.set(chain);
        Ok(out)
    }

    /// Whether the unit translation normalizes to a translation under every generator.
    pub fn normalizes_translations(&self) -> bool {
        let m = self.degree;
        let t = translation(m, 1);
        self.gens.iter().all(|g| {
            let c = t.conjugate_by(g);
            let d = c.apply(0);
            (0..m).all(|x| c.apply(x) == (x + d) % m)
        })
    }
}

/// Breadth-first table of induced section actions, used for lifting.
pub struct Lifter {
    sec: Section,
    table: HashMap<Perm, Perm>,
}

impl Lifter {
    pub fn new(g: &PermGroup, sec: Section, threshold: usize) -> Result<Lifter> {
        check_section_invariant(g, sec)?;
        let stab = if sec.u == sec.n {
            g.clone()
        } else {
            g.block_stabilizer(&coset_blocks(sec.n, sec.u), 0)?
        };
        let m = sec.order();
        let mut table: HashMap<Perm, Perm> = HashMap::new();
        let mut queue = VecDeque::new();
        table.insert(Perm::identity(m), Perm::identity(g.degree()));
        queue.push_back(Perm::identity(m));
        let induced: Vec<(Perm, &Perm)> =
            stab.generators().iter().map(|s| (induced_perm(s, sec), s)).collect();
        // the stabilizer is owned locally; clone generators to keep the table self-contained
        let induced: Vec<(Perm, Perm)> = induced.into_iter().map(|(p, s)| (p, s.clone())).collect();
        while let Some(img) = queue.pop_front() {
            let elt = table[&img].clone();
            for (p, s) in &induced {
                let next = img.then(p);
                if !table.contains_key(&next) {
                    if table.len() >= threshold {
                        return Err(Error::LiftThreshold(threshold));
                    }
                    table.insert(next.clone(), elt.then(s));
                    queue.push_back(next);
                }
            }
        }
        Ok(Lifter { sec, table })
    }

    pub fn section(&self) -> Section {
        self.sec
    }

    pub fn induced_order(&self) -> usize {
        self.table.len()
    }

    pub fn lift(&self, target: &Perm) -> Result<Perm> {
        self.table.get(target).cloned().ok_or(Error::NotInInducedGroup)
    }
}

/// Some element of `g` inducing `target` on the section.
pub fn preimage_with_induced(g: &PermGroup, sec: Section, target: &Perm, threshold: usize) -> Result<Perm> {
    if target.degree() != sec.order() {
        return Err(Error::DegreeMismatch(sec.order(), target.degree()));
    }
    Lifter::new(g, sec, threshold)?.lift(target)
}

pub fn translation(m: usize, k: usize) -> Perm {
    Perm::from_fn(m, |x| (x + k) % m)
}

pub fn multiplier(m: usize, g: usize) -> Perm {
    Perm::from_fn(m, |x| zn::mul_mod(x, g, m))
}

/// Cosets of the subgroup of order `d` in `Z_n`, ordered by representative.
pub fn coset_blocks(n: usize, d: usize) -> Vec<Vec<usize>> {
    let step = n / d;
    (0..step).map(|r| (0..d).map(|k| r + k * step).collect()).collect()
}

fn block_index(m: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut block_of = vec![usize::MAX; m];
    for (i, blk) in blocks.iter().enumerate() {
        if blk.is_empty() {
            return Err(Error::MalformedPartition("empty block".into()));
        }
        for &x in blk {
            if x >= m || block_of[x] != usize::MAX {
                return Err(Error::MalformedPartition(format!("bad block point {x}")));
            }
            block_of[x] = i;
        }
    }
    if block_of.contains(&usize::MAX) {
        return Err(Error::MalformedPartition("blocks do not cover".into()));
    }
    Ok(block_of)
}

fn check_section_invariant(g: &PermGroup, sec: Section) -> Result<()> {
    let n = sec.n;
    if g.degree() != n {
        return Err(Error::DegreeMismatch(n, g.degree()));
    }
    let ustep = n / sec.u;
    let lstep = n / sec.l;
    for (i, p) in g.generators().iter().enumerate() {
        for x in 0..n {
            let a = p.apply(x);
            let bu = p.apply((x + ustep) % n);
            let bl = p.apply((x + lstep) % n);
            if (bu + n - a) % ustep != 0 || (bl + n - a) % lstep != 0 {
                return Err(Error::SectionNotInvariant(i));
            }
        }
    }
    Ok(())
}

/// Action of an element stabilizing `U` on the L-cosets inside `U`.
fn induced_perm(g: &Perm, sec: Section) -> Perm {
    let m = sec.order();
    let step = sec.n / sec.u;
    Perm::from_fn(m, |k| (g.apply(k * step) / step) % m)
}

pub fn orbits_of(m: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(m);
    for g in gens {
        for x in 0..m {
            uf.union(x, g.apply(x));
        }
    }
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in 0..m {
        let r = uf.find(x);
        let idx = *by_root.entry(r).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[idx].push(x);
    }
    out
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(m: usize) -> Self {
        UnionFind { parent: (0..m as u32).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }

    pub(crate) fn labels(&mut self) -> Vec<u32> {
        let m = self.parent.len();
        let mut label = vec![u32::MAX; m];
        let mut out = vec![0u32; m];
        let mut next = 0u32;
        for x in 0..m {
            let r = self.find(x);
            if label[r] == u32::MAX {
                label[r] = next;
                next += 1;
            }
            out[x] = label[r];
        }
        out
    }
}
