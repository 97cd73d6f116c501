//! Arithmetic of the cyclic group `Z_n`.
//!
//! Every subgroup of `Z_n` is named by its order `d`, a divisor of `n`; the
//! subgroup itself is `{0, n/d, 2n/d, ...}`. A section `U/L` is a pair of
//! orders `l | u | n` and is always identified with `Z_{u/l}` through
//! `g -> (g / (n/u)) mod (u/l)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the modulus accepted by the library.
pub const DEFAULT_MODULUS_LIMIT: usize = 100_000;

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization as `(prime, exponent)` pairs.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of prime factors counted with multiplicity.
pub fn omega(n: usize) -> u32 {
    factorize(n).iter().map(|&(_, e)| e).sum()
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

pub fn euler_phi(n: usize) -> usize {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn mul_mod(a: usize, b: usize, n: usize) -> usize {
    ((a as u128 * b as u128) % n as u128) as usize
}

pub fn pow_mod(mut base: usize, mut exp: usize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Multiplicative order of the unit `g` modulo `n`.
pub fn unit_order(g: usize, n: usize) -> Result<usize> {
    if n == 1 {
        return Ok(1);
    }
    if gcd(g % n, n) != 1 {
        return Err(Error::NotAUnit { n, g });
    }
    let phi = euler_phi(n);
    let mut order = phi;
    for (p, _) in factorize(phi) {
        while order % p == 0 && pow_mod(g, order / p, n) == 1 {
            order /= p;
        }
    }
    Ok(order)
}

/// Units of `Z_n` in increasing order (`{0}` counts as the unit of `Z_1`).
pub fn units(n: usize) -> Vec<usize> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&x| gcd(x, n) == 1).collect()
}

/// Inverse of a unit modulo `n`.
pub fn inv_mod(a: usize, n: usize) -> Result<usize> {
    if n == 1 {
        return Ok(0);
    }
    let (mut old_r, mut r) = (a as i128 % n as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotAUnit { n, g: a });
    }
    Ok(old_s.rem_euclid(n as i128) as usize)
}

/// Checks `1 <= n <= limit`.
pub fn check_modulus(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidModulus(n));
    }
    if n > limit {
        return Err(Error::ModulusTooLarge { n, limit });
    }
    Ok(())
}

/// The unique subgroup of order `d` of `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgroupId {
    pub n: usize,
    pub d: usize,
}

impl SubgroupId {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 || n % d != 0 {
            return Err(Error::NotADivisor { n, d });
        }
        Ok(SubgroupId { n, d })
    }

    /// Distance between consecutive elements, `n/d`.
    pub fn step(&self) -> usize {
        self.n / self.d
    }

    pub fn contains(&self, g: usize) -> bool {
        g % self.step() == 0
    }

    pub fn elements(&self) -> Vec<usize> {
        let step = self.step();
        (0..self.d).map(|k| k * step).collect()
    }
}

/// `{k * n/d : 0 <= k < d}`.
pub fn subgroup_elements(s: SubgroupId) -> Vec<usize> {
    s.elements()
}

/// A section `U/L` of `Z_n`, with `U` and `L` given by their orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Section {
    pub n: usize,
    pub u: usize,
    pub l: usize,
}

impl Section {
    pub fn new(n: usize, u: usize, l: usize) -> Result<Self> {
        if n == 0 || u == 0 || n % u != 0 {
            return Err(Error::NotADivisor { n, d: u });
        }
        if l == 0 || u % l != 0 {
            return Err(Error::NotADivisor { n: u, d: l });
        }
        Ok(Section { n, u, l })
    }

    /// The whole group `G/1`.
    pub fn whole(n: usize) -> Self {
        Section { n, u: n, l: 1 }
    }

    pub fn order(&self) -> usize {
        self.u / self.l
    }

    pub fn upper(&self) -> SubgroupId {
        SubgroupId { n: self.n, d: self.u }
    }

    pub fn lower(&self) -> SubgroupId {
        SubgroupId { n: self.n, d: self.l }
    }

    pub fn contains(&self, g: usize) -> bool {
        g % (self.n / self.u) == 0
    }

    /// Image of `g` in `Z_{u/l}`.
    pub fn project(&self, g: usize) -> Result<usize> {
        let step = self.n / self.u;
        if g >= self.n || g % step != 0 {
            return Err(Error::NotInSubgroup { n: self.n, u: self.u, g });
        }
        Ok((g / step) % self.order())
    }

    /// The canonical element of `U` projecting onto `k`, namely `k * n/u`.
    pub fn lift(&self, k: usize) -> usize {
        (k % self.order()) * (self.n / self.u)
    }

    /// True iff `self` is a multiple of `s`: with `s = L1/L0` and
    /// `self = U1/U0`, `L0 = U0 ∩ L1` and `U1 = U0 L1`.
    pub fn is_multiple_of(&self, s: &Section) -> bool {
        self.n == s.n && s.l == gcd(self.l, s.u) && self.u == lcm(self.l, s.u)
    }

    /// `self <= t` in the section order: `U0 <= L0` and `L1 <= U1`.
    pub fn is_subsection_of(&self, t: &Section) -> bool {
        self.l % t.l == 0 && t.u % self.u == 0
    }
}

/// `t` is a multiple of `s`.
pub fn is_multiple(t: &Section, s: &Section) -> bool {
    t.is_multiple_of(s)
}

/// `g -> (g / (n/u)) mod (u/l)`.
pub fn section_project(sec: &Section, g: usize) -> Result<usize> {
    sec.project(g)
}

/// Orbits of the multiplicative action of `<gens>` on `Z_n`, in canonical
/// order (cells sorted, cells ordered by their minimum).
pub fn unit_orbits(n: usize, gens: &[usize]) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Err(Error::InvalidModulus(n));
    }
    for &g in gens {
        if n > 1 && gcd(g % n, n) != 1 {
            return Err(Error::NotAUnit { n, g });
        }
    }
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for &g in gens {
                let y = mul_mod(x, g, n);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// The subgroup of units generated by `gens`, sorted.
pub fn unit_subgroup(n: usize, gens: &[usize]) -> Result<Vec<usize>> {
    if n == 1 {
        return Ok(vec![0]);
    }
    for &g in gens {
        if gcd(g % n, n) != 1 {
            return Err(Error::NotAUnit { n, g });
        }
    }
    let mut seen = vec![false; n];
    seen[1] = true;
    let mut elems = vec![1];
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i];
        for &g in gens {
            let y = mul_mod(x, g, n);
            if !seen[y] {
                seen[y] = true;
                elems.push(y);
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    Ok(elems)
}

/// A small generating set of the full unit group of `Z_n`.
pub fn unit_group_generators(n: usize) -> Vec<usize> {
    if n <= 2 {
        return Vec::new();
    }
    let mut gens = Vec::new();
    let mut inside = vec![false; n];
    inside[1] = true;
    let mut elems = vec![1];
    for g in units(n) {
        if inside[g] {
            continue;
        }
        gens.push(g);
        // close the subgroup under the new generator
        let mut i = 0;
        let mut current = elems.clone();
        while i < current.len() {
            let x = current[i];
            for &h in &gens {
                let y = mul_mod(x, h, n);
                if !inside[y] {
                    inside[y] = true;
                    current.push(y);
                }
            }
            i += 1;
        }
        elems = current;
    }
    gens
}

/// All subgroups of the unit group of `Z_n`, each as a sorted element list.
pub fn unit_subgroups(n: usize) -> Vec<Vec<usize>> {
    use std::collections::BTreeSet;
    let all = units(n);
    let trivial = unit_subgroup(n, &[]).expect("trivial subgroup");
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(trivial.clone());
    // cyclic subgroups first, then joins until closure
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for &g in &all {
            if h.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens: Vec<usize> = h.clone();
            gens.push(g);
            let k = unit_subgroup(n, &gens).expect("units");
            if found.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    found.into_iter().collect()
}

/// Chinese remainder: the residue mod `m1*m2` congruent to `a` mod `m1` and
/// `b` mod `m2`.
pub fn crt(a: usize, m1: usize, b: usize, m2: usize) -> Result<usize> {
    if gcd(m1, m2) != 1 {
        return Err(Error::NotCoprime(m1, m2));
    }
    let m = m1 * m2;
    if m == 1 {
        return Ok(0);
    }
    let (e1, e2) = crt_idempotents(m1, m2)?;
    Ok((mul_mod(a % m1.max(1), e1, m) + mul_mod(b % m2.max(1), e2, m)) % m)
}

/// The idempotents `(e1, e2)` of `Z_{m1 m2}` with `e1 = 1 mod m1`,
/// `e1 = 0 mod m2` and symmetrically for `e2`.
pub fn crt_idempotents(m1: usize, m2: usize) -> Result<(usize, usize)> {
    if gcd(m1, m2) != 1 {
        return Err(Error::NotCoprime(m1, m2));
    }
    let m = m1 * m2;
    if m == 1 {
        return Ok((0, 0));
    }
    let e1 = if m1 == 1 { 0 } else { mul_mod(m2, inv_mod(m2 % m1, m1)?, m) };
    let e2 = if m2 == 1 { 0 } else { mul_mod(m1, inv_mod(m1 % m2, m2)?, m) };
    Ok((e1, e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subgroup_examples() {
        assert_eq!(subgroup_elements(SubgroupId::new(6, 3).unwrap()), vec![0, 2, 4]);
        assert_eq!(subgroup_elements(SubgroupId::new(6, 1).unwrap()), vec![0]);
        let big = subgroup_elements(SubgroupId::new(3575, 275).unwrap());
        assert_eq!(big.len(), 275);
        assert!(big.iter().all(|g| g % 13 == 0));
        assert_eq!(SubgroupId::new(6, 4), Err(Error::NotADivisor { n: 6, d: 4 }));
    }

    #[test]
    fn project_examples() {
        assert_eq!(Section::new(8, 8, 2).unwrap().project(5), Ok(1));
        assert_eq!(Section::new(8, 4, 1).unwrap().project(6), Ok(3));
        assert_eq!(Section::new(9, 3, 1).unwrap().project(6), Ok(2));
        assert!(Section::new(9, 3, 1).unwrap().project(4).is_err());
    }

    #[test]
    fn multiple_examples() {
        let s = Section::new(12, 2, 1).unwrap();
        let t = Section::new(12, 6, 3).unwrap();
        assert!(is_multiple(&t, &s));
        let s9 = Section::new(9, 3, 1).unwrap();
        let t9 = Section::new(9, 9, 3).unwrap();
        assert!(!is_multiple(&t9, &s9));
        for (u, l) in [(12, 4), (6, 1), (1, 1)] {
            let s = Section::new(12, u, l).unwrap();
            assert!(is_multiple(&s, &s));
        }
    }

    #[test]
    fn unit_orbit_examples() {
        assert_eq!(
            unit_orbits(8, &[3]).unwrap(),
            vec![vec![0], vec![1, 3], vec![2, 6], vec![4], vec![5, 7]]
        );
        assert_eq!(unit_orbits(5, &[2]).unwrap(), vec![vec![0], vec![1, 2, 3, 4]]);
        assert_eq!(unit_orbits(7, &[1]).unwrap().len(), 7);
        assert_eq!(unit_orbits(8, &[2]), Err(Error::NotAUnit { n: 8, g: 2 }));
    }

    #[test]
    fn orders_and_generators() {
        assert_eq!(unit_order(2, 25).unwrap(), 20);
        assert_eq!(unit_order(3, 11).unwrap(), 5);
        assert_eq!(unit_order(5, 13).unwrap(), 4);
        assert_eq!(unit_order(8, 13).unwrap(), 4);
        for n in 1..60 {
            let gens = unit_group_generators(n);
            assert_eq!(unit_subgroup(n, &gens).unwrap().len(), euler_phi(n).max(1), "n={n}");
        }
        assert_eq!(unit_subgroups(8).len(), 5);
        assert_eq!(unit_subgroups(7).len(), 4);
    }

    #[test]
    fn crt_roundtrip() {
        let (e1, e2) = crt_idempotents(3, 5).unwrap();
        assert_eq!((e1 % 3, e1 % 5, e2 % 3, e2 % 5), (1, 0, 0, 1));
        assert_eq!(crt(2, 25, 3, 11).unwrap() % 25, 2);
        assert_eq!(crt(2, 25, 3, 11).unwrap() % 11, 3);
    }

    fn divisor_pair() -> impl Strategy<Value = (usize, usize, usize)> {
        (1usize..400).prop_flat_map(|n| {
            let ds = divisors(n);
            let k = ds.len();
            (Just(n), 0..k, 0..k).prop_map(move |(n, i, j)| (n, ds[i], ds[j]))
        })
    }

    proptest! {
        #[test]
        fn lattice_meets_and_joins((n, d1, d2) in divisor_pair()) {
            let a: std::collections::BTreeSet<_> = subgroup_elements(SubgroupId::new(n, d1).unwrap()).into_iter().collect();
            let b: std::collections::BTreeSet<_> = subgroup_elements(SubgroupId::new(n, d2).unwrap()).into_iter().collect();
            let meet: std::collections::BTreeSet<_> = subgroup_elements(SubgroupId::new(n, gcd(d1, d2)).unwrap()).into_iter().collect();
            let join: std::collections::BTreeSet<_> = subgroup_elements(SubgroupId::new(n, lcm(d1, d2)).unwrap()).into_iter().collect();
            prop_assert_eq!(a.intersection(&b).cloned().collect::<std::collections::BTreeSet<_>>(), meet);
            let sum: std::collections::BTreeSet<_> = a.iter().flat_map(|x| b.iter().map(move |y| (x + y) % n)).collect();
            prop_assert_eq!(sum, join);
        }

        #[test]
        fn projection_is_a_homomorphism((n, u, l) in divisor_pair(), a in 0usize..1000, b in 0usize..1000) {
            prop_assume!(u % l == 0);
            let sec = Section::new(n, u, l).unwrap();
            let step = n / u;
            let g = (a % u) * step;
            let h = (b % u) * step;
            let m = sec.order();
            prop_assert_eq!(sec.project((g + h) % n).unwrap(), (sec.project(g).unwrap() + sec.project(h).unwrap()) % m);
            let kernel: Vec<usize> = (0..u).map(|k| k * step).filter(|&x| sec.project(x).unwrap() == 0).collect();
            prop_assert_eq!(kernel, subgroup_elements(SubgroupId::new(n, l).unwrap()));
        }

        #[test]
        fn orbits_refine_under_fewer_generators(n in 2usize..200, seed in 0usize..1000) {
            let us = units(n);
            let g1 = us[seed % us.len()];
            let g2 = us[(seed / 7) % us.len()];
            let fine = unit_orbits(n, &[g1]).unwrap();
            let coarse = unit_orbits(n, &[g1, g2]).unwrap();
            let mut cell = vec![0; n];
            for (i, c) in coarse.iter().enumerate() { for &x in c { cell[x] = i; } }
            for c in &fine { prop_assert!(c.iter().all(|&x| cell[x] == cell[c[0]])); }
            prop_assert!(fine.iter().any(|c| c == &vec![0]));
        }
    }
}
