//! Cayley schemes of S-rings and their automorphism groups.
//!
//! The search individualizes vertices, refines the coloring against the
//! edge colors, and determines the basic orbits of the automorphism group
//! bottom-up along the first path of the search tree. The translation group
//! and the multipliers fixing every basic set are known automorphisms and
//! are used to skip candidates that are already in a known orbit.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{self, Perm, PermGroup, StabChain};
use crate::sring::SRing;
use crate::zn::Section;

pub const DEFAULT_AUT_BOUND: usize = 5000;
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutOptions {
    pub bound: usize,
    pub node_budget: usize,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions { bound: DEFAULT_AUT_BOUND, node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// Edge coloring `(g, h) -> index of the basic set containing h - g`.
#[derive(Debug, Clone)]
pub struct CayleyScheme {
    n: usize,
    rank: usize,
    cell_of: Vec<u32>,
}

pub fn cayley_scheme(a: &SRing) -> CayleyScheme {
    CayleyScheme { n: a.n(), rank: a.rank(), cell_of: a.cell_indices().to_vec() }
}

impl CayleyScheme {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn color(&self, g: usize, h: usize) -> u32 {
        self.cell_of[(h + self.n - g) % self.n]
    }

    pub fn preserves(&self, p: &Perm) -> bool {
        let n = self.n;
        if p.degree() != n {
            return false;
        }
        // rows through 0 first, a cheap filter
        let p0 = p.apply(0);
        if (0..n).any(|y| self.color(p0, p.apply(y)) != self.cell_of[y]) {
            return false;
        }
        (1..n).all(|x| {
            let px = p.apply(x);
            (0..n).all(|y| self.color(px, p.apply(y)) == self.color(x, y))
        })
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Ordered partition of the vertices; cells are identified by start position.
#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    cell: Vec<usize>,
    end: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn unit(n: usize) -> Partition {
        let mut end = vec![0; n];
        end[0] = n;
        Partition { lab: (0..n).collect(), cell: vec![0; n], end, cells: 1 }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    /// First smallest non-singleton cell, by position.
    fn target(&self) -> Option<usize> {
        let n = self.lab.len();
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < n {
            let e = self.end[s];
            let len = e - s;
            if len > 1 && best.is_none_or(|(_, l)| len < l) {
                best = Some((s, len));
            }
            s = e;
        }
        best.map(|(s, _)| s)
    }

    fn individualize(&self, v: usize) -> (Partition, usize) {
        let mut p = self.clone();
        let s = p.cell[v];
        let e = p.end[s];
        let i = p.lab[s..e].iter().position(|&x| x == v).expect("vertex in its cell") + s;
        p.lab.swap(s, i);
        p.end[s] = s + 1;
        p.end[s + 1] = e;
        for k in s + 1..e {
            let x = p.lab[k];
            p.cell[x] = s + 1;
        }
        p.cells += 1;
        (p, s)
    }
}

struct Refiner<'a> {
    scheme: &'a CayleyScheme,
    weight: Vec<u64>,
}

impl<'a> Refiner<'a> {
    fn new(scheme: &'a CayleyScheme) -> Self {
        let weight = (0..scheme.rank as u64).map(|c| mix(c + 1)).collect();
        Refiner { scheme, weight }
    }

    /// Equitable refinement; returns a trace invariant under isomorphism.
    fn refine(&self, p: &mut Partition, initial: &[usize]) -> u64 {
        let n = p.lab.len();
        let mut pending = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for &s in initial {
            if !pending[s] {
                pending[s] = true;
                queue.push_back(s);
            }
        }
        let mut trace = mix(p.cells as u64);
        let mut sig = vec![0u64; n];
        while let Some(ws) = queue.pop_front() {
            pending[ws] = false;
            if p.is_discrete() {
                break;
            }
            let we = p.end[ws];
            let w: Vec<usize> = p.lab[ws..we].to_vec();
            let mut s = 0;
            while s < n {
                let e = p.end[s];
                if e - s > 1 {
                    for k in s..e {
                        let x = p.lab[k];
                        let mut acc = 0u64;
                        for &y in &w {
                            acc = acc.wrapping_add(self.weight[self.scheme.color(x, y) as usize]);
                        }
                        sig[x] = acc;
                    }
                }
                s = e;
            }
            trace = mix(trace ^ (ws as u64) ^ ((we as u64) << 20));
            let mut s = 0;
            while s < n {
                let e = p.end[s];
                if e - s > 1 {
                    let first = sig[p.lab[s]];
                    if p.lab[s + 1..e].iter().any(|&x| sig[x] != first) {
                        let sig_ref = &sig;
                        p.lab[s..e].sort_by_key(|&x| sig_ref[x]);
                        let was_pending = pending[s];
                        let mut runs: Vec<(usize, usize)> = Vec::new();
                        let mut a = s;
                        while a < e {
                            let v = sig[p.lab[a]];
                            let mut b = a + 1;
                            while b < e && sig[p.lab[b]] == v {
                                b += 1;
                            }
                            runs.push((a, b));
                            trace = mix(trace ^ v ^ ((b - a) as u64));
                            a = b;
                        }
                        for &(a, b) in &runs {
                            p.end[a] = b;
                            for k in a..b {
                                let x = p.lab[k];
                                p.cell[x] = a;
                            }
                        }
                        p.cells += runs.len() - 1;
                        let largest = runs
                            .iter()
                            .enumerate()
                            .max_by_key(|(i, r)| (r.1 - r.0, usize::MAX - i))
                            .map(|(i, _)| i)
                            .unwrap();
                        for (i, &(a, _)) in runs.iter().enumerate() {
                            if (was_pending || i != largest) && !pending[a] {
                                pending[a] = true;
                                queue.push_back(a);
                            }
                        }
                    }
                }
                s = e;
            }
        }
        mix(trace ^ p.cells as u64)
    }
}

struct PathNode {
    part: Partition,
    trace: u64,
    target: Option<usize>,
    chosen: usize,
}

struct Search<'a> {
    scheme: &'a CayleyScheme,
    refiner: Refiner<'a>,
    path: Vec<PathNode>,
    nodes: usize,
    budget: usize,
}

impl<'a> Search<'a> {
    fn child(&mut self, part: &Partition, v: usize) -> Result<(Partition, u64)> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudget { nodes: self.nodes });
        }
        let (mut c, s) = part.individualize(v);
        let t = self.refiner.refine(&mut c, &[s]);
        Ok((c, t))
    }

    fn first_path(&mut self) -> Result<()> {
        let n = self.scheme.n;
        let mut part = Partition::unit(n);
        let trace = self.refiner.refine(&mut part, &[0]);
        let mut node = PathNode { part, trace, target: None, chosen: 0 };
        loop {
            node.target = node.part.target();
            let Some(t) = node.target else {
                self.path.push(node);
                return Ok(());
            };
            let v = *node.part.lab[t..node.part.end[t]].iter().min().unwrap();
            node.chosen = v;
            let (c, tr) = self.child(&node.part, v)?;
            self.path.push(node);
            node = PathNode { part: c, trace: tr, target: None, chosen: 0 };
        }
    }

    fn matches(&self, depth: usize, part: &Partition, trace: u64) -> bool {
        let q = &self.path[depth];
        q.trace == trace && q.part.cells == part.cells
    }

    /// Looks below `part` (matching the first path at `depth`) for a leaf
    /// that yields an automorphism.
    fn dfs(&mut self, depth: usize, part: &Partition) -> Result<Option<Perm>> {
        if part.is_discrete() {
            let leaf = &self.path[depth].part;
            let n = self.scheme.n;
            let mut img = vec![0usize; n];
            for k in 0..n {
                img[leaf.lab[k]] = part.lab[k];
            }
            let p = Perm::from_fn(n, |x| img[x]);
            return Ok(if self.scheme.preserves(&p) { Some(p) } else { None });
        }
        let Some(t) = part.target() else { return Ok(None) };
        if Some(t) != self.path[depth].target {
            return Ok(None);
        }
        let mut cands: Vec<usize> = part.lab[t..part.end[t]].to_vec();
        cands.sort_unstable();
        for x in cands {
            let (c, tr) = self.child(part, x)?;
            if !self.matches(depth + 1, &c, tr) {
                continue;
            }
            if let Some(p) = self.dfs(depth + 1, &c)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}

/// Automorphism group of a Cayley scheme together with its search data.
pub struct AutGroup {
    pub group: PermGroup,
    pub base: Vec<usize>,
    pub nodes: usize,
}

impl AutGroup {
    pub fn order(&self) -> BigUint {
        self.group.order()
    }

    /// Orbits of the stabilizer of 0.
    pub fn stabilizer_orbits(&self) -> Vec<Vec<usize>> {
        let chain = self.group.chain();
        let mut orbits = perm::orbits_of(self.group.degree(), &chain.stabilizer_generators(1));
        for o in orbits.iter_mut() {
            o.sort_unstable();
        }
        orbits.sort_unstable_by_key(|o| o[0]);
        orbits
    }
}

pub fn aut_group(a: &SRing) -> Result<AutGroup> {
    aut_group_with(a, AutOptions::default())
}

pub fn aut_group_with(a: &SRing, opts: AutOptions) -> Result<AutGroup> {
    let n = a.n();
    if n > opts.bound {
        return Err(Error::AutBound { n, bound: opts.bound });
    }
    let scheme = cayley_scheme(a);
    let mut search = Search {
        scheme: &scheme,
        refiner: Refiner::new(&scheme),
        path: Vec::new(),
        nodes: 0,
        budget: opts.node_budget,
    };
    search.first_path()?;
    let k = search.path.len() - 1;
    let base: Vec<usize> = search.path[..k].iter().map(|nd| nd.chosen).collect();
    let mut chain = StabChain::new(n, &[], &base);
    let mut gens: Vec<Perm> = Vec::new();
    let mut seeds = vec![perm::translation(n, 1)];
    seeds.extend(a.fixing_multipliers().into_iter().map(|m| perm::multiplier(n, m)));
    for g in seeds {
        if !g.is_identity() && chain.extend(&g) {
            gens.push(g);
        }
    }
    for i in (0..k).rev() {
        let t = search.path[i].target.expect("inner node");
        let part = search.path[i].part.clone();
        let mut cell: Vec<usize> = part.lab[t..part.end[t]].to_vec();
        cell.sort_unstable();
        for w in cell {
            if chain.in_basic_orbit(i, w) {
                continue;
            }
            let (c, tr) = search.child(&part, w)?;
            if !search.matches(i + 1, &c, tr) {
                continue;
            }
            if let Some(g) = search.dfs(i + 1, &c)? {
                chain.extend(&g);
                gens.push(g);
            }
        }
    }
    for (i, g) in gens.iter().enumerate() {
        if !scheme.preserves(g) {
            return Err(Error::Internal(format!("generator {i} does not preserve the scheme")));
        }
    }
    let nodes = search.nodes;
    Ok(AutGroup { group: PermGroup::with_chain(n, gens, chain)?, base, nodes })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurityReport {
    pub schurian: bool,
    pub aut_order: String,
    pub stabilizer_orbits: Vec<Vec<usize>>,
}

pub fn schurity_report(a: &SRing, opts: AutOptions) -> Result<SchurityReport> {
    let aut = aut_group_with(a, opts)?;
    let orbits = aut.stabilizer_orbits();
    Ok(SchurityReport {
        schurian: orbits.as_slice() == a.basic_sets(),
        aut_order: aut.order().to_string(),
        stabilizer_orbits: orbits,
    })
}

pub fn is_schurian(a: &SRing) -> Result<bool> {
    is_schurian_with(a, AutOptions::default())
}

pub fn is_schurian_with(a: &SRing, opts: AutOptions) -> Result<bool> {
    Ok(schurity_report(a, opts)?.schurian)
}

pub fn is_normal(a: &SRing) -> Result<bool> {
    is_normal_with(a, AutOptions::default())
}

pub fn is_normal_with(a: &SRing, opts: AutOptions) -> Result<bool> {
    Ok(aut_group_with(a, opts)?.group.normalizes_translations())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonschurityWitness {
    pub section: Section,
    pub induced_from_restriction_order: String,
    pub induced_from_quotient_order: String,
    pub intersection_order: String,
    pub section_aut_order: String,
    pub intersection_two_orbits: usize,
    pub section_two_orbits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonschurityResult {
    pub holds: bool,
    pub witness: NonschurityWitness,
}

/// One-sided test: `holds` certifies that `a` is not schurian.
pub fn nonschurity_criterion(
    a: &SRing,
    sec: Section,
    opts: AutOptions,
    threshold: u64,
) -> Result<NonschurityResult> {
    let n = a.n();
    if sec.n != n {
        return Err(Error::ShapeMismatch(format!("section of Z_{} for a ring over Z_{n}", sec.n)));
    }
    if !a.satisfies_s_condition(sec.u, sec.l) {
        return Err(Error::SConditionFails(sec.u, sec.l));
    }
    let m = sec.order();
    let a_u = a.restriction(sec.u)?;
    let a_q = a.quotient(sec.l)?;
    let a_s = a.section_ring(sec)?;
    let g_u = aut_group_with(&a_u, opts)?.group;
    let g_q = aut_group_with(&a_q, opts)?.group;
    let g_s = aut_group_with(&a_s, opts)?.group;
    let ind_u = g_u.induced_on_section(Section::new(sec.u, sec.u, sec.l)?)?;
    let ind_q = g_q.induced_on_section(Section::new(n / sec.l, m, 1)?)?;
    let inter = ind_u.intersect(&ind_q, threshold)?;
    let lab_i = inter.two_orbits();
    let lab_s = g_s.two_orbits();
    let count = |l: &[u32]| l.iter().max().map_or(0, |&x| x as usize + 1);
    Ok(NonschurityResult {
        holds: lab_i != lab_s,
        witness: NonschurityWitness {
            section: sec,
            induced_from_restriction_order: ind_u.order().to_string(),
            induced_from_quotient_order: ind_q.order().to_string(),
            intersection_order: inter.order().to_string(),
            section_aut_order: g_s.order().to_string(),
            intersection_two_orbits: count(&lab_i),
            section_two_orbits: count(&lab_s),
        },
    })
}
