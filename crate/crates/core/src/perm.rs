//! Permutations of `0..n` and constructive factorizations into derangements.
//!
//! Composition is right-to-left: `compose(p, q)(x) = p(q(x))`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutations act on different domains ({left} vs {right})")]
    DomainMismatch { left: usize, right: usize },
    #[error("image list is not a bijection of 1..={0}")]
    NotBijection(usize),
    #[error("could not parse {token:?} as a point")]
    Parse { token: String },
    #[error("a derangement needs at least two points, domain has {0}")]
    TooSmall(usize),
    #[error("pin {from}->{to} is not usable on this domain")]
    BadPin { from: usize, to: usize },
    #[error("permutation is odd")]
    OddPermutation,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("odd permutations of 3 points are not products of derangements")]
    NotFactorable,
    #[error("no pair of {0}-cycles found within the retry budget")]
    SearchExhausted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A bijection of `0..n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// The cycle `(c0 c1 ... ck)` on `0..n`, fixing every other point.
    pub fn from_cycle(n: usize, cycle: &[usize]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        for (i, &x) in cycle.iter().enumerate() {
            if x >= n {
                return Err(PermError::NotBijection(n));
            }
            images[x] = cycle[(i + 1) % cycle.len()];
        }
        Self::from_images(images)
    }

    /// Parses a 1-based image list: `"2,1,4,3"` maps 1→2, 2→1, 3→4, 4→3.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let images = text
            .split(',')
            .map(|token| {
                let token = token.trim();
                match token.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(PermError::Parse {
                        token: token.to_string(),
                    }),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// Disjoint cycles including fixed points, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_derangement(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i != x)
    }

    /// A single cycle through all `n` points.
    pub fn is_full_cycle(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut x = self.images[0];
        let mut steps = 1;
        while x != 0 {
            x = self.images[x];
            steps += 1;
            if steps > n {
                return false;
            }
        }
        steps == n
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        Ok(())
    }
}

/// `p ∘ q`: apply `q` first.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    if p.len() != q.len() {
        return Err(PermError::DomainMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(Permutation {
        images: q.images.iter().map(|&x| p.images[x]).collect(),
    })
}

/// A deterministic derangement of `domain`, extended by the identity to `0..universe`.
///
/// The derangement is a cyclic rotation of the sorted domain. Without a pin it
/// shifts by one; with a pin `r -> s` the shift is chosen so that `r` maps to `s`.
pub fn make_derangement(
    universe: usize,
    domain: &[usize],
    pin: Option<(usize, usize)>,
) -> Result<Permutation, PermError> {
    let mut sorted = domain.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 2 {
        return Err(PermError::TooSmall(sorted.len()));
    }
    if let Some(&x) = sorted.last().filter(|&&x| x >= universe) {
        return Err(PermError::NotBijection(x));
    }
    let m = sorted.len();
    let shift = match pin {
        None => 1,
        Some((from, to)) => {
            let i = sorted.binary_search(&from);
            let j = sorted.binary_search(&to);
            match (i, j) {
                (Ok(i), Ok(j)) if i != j => (j + m - i) % m,
                _ => return Err(PermError::BadPin { from, to }),
            }
        }
    };
    let mut images: Vec<usize> = (0..universe).collect();
    for (i, &x) in sorted.iter().enumerate() {
        images[x] = sorted[(i + shift) % m];
    }
    Ok(Permutation { images })
}

/// Writes an even permutation as `c1 ∘ c2` with both factors full cycles.
///
/// For `n <= 6` the n-cycles are searched exhaustively in a fixed order. Above
/// that, `c1` is drawn uniformly from a generator seeded by `p` itself and
/// accepted once `c1⁻¹ ∘ p` is a full cycle. Either way the result is checked
/// before it is returned.
pub fn even_to_two_ncycles(p: &Permutation) -> Result<(Permutation, Permutation), PermError> {
    let n = p.len();
    if n < 2 {
        return Err(PermError::Unsupported("need at least two points"));
    }
    if p.parity() == Parity::Odd {
        return Err(PermError::OddPermutation);
    }
    let certify = |c1: Permutation| -> Option<(Permutation, Permutation)> {
        let c2 = compose(&c1.inverse(), p).ok()?;
        if c2.is_full_cycle() && compose(&c1, &c2).ok()? == *p {
            Some((c1, c2))
        } else {
            None
        }
    };

    if n <= 6 {
        let mut rest: Vec<usize> = (1..n).collect();
        loop {
            let mut order = vec![0];
            order.extend_from_slice(&rest);
            let c1 = Permutation::from_cycle(n, &order)?;
            if let Some(pair) = certify(c1) {
                return Ok(pair);
            }
            if !next_permutation(&mut rest) {
                return Err(PermError::SearchExhausted(n));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(fingerprint(p.images()));
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..(1000 * n) {
        order.shuffle(&mut rng);
        let c1 = Permutation::from_cycle(n, &order)?;
        if let Some(pair) = certify(c1) {
            return Ok(pair);
        }
    }
    Err(PermError::SearchExhausted(n))
}

/// Splitmix64-style fold; stable across platforms and releases.
fn fingerprint(values: &[usize]) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15 ^ values.len() as u64;
    for &v in values {
        h = h.wrapping_add(v as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
        h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^= h >> 31;
    }
    h
}

/// Lexicographic successor in place; false when `v` was the last arrangement.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Writes the transposition `(x y)` on `0..n` as `d2 ∘ d1` with both factors derangements.
///
/// With `a1 = x`, `a3 = y` and the other points filling `a2, a4, ..., an` in
/// ascending order, `σ = (a1 ... an)` and `τ = (a2 a4)` give `d1 = τ ∘ σ` and
/// `d2 = σ⁻¹`.
pub fn transposition_to_two_derangements(
    x: usize,
    y: usize,
    n: usize,
) -> Result<(Permutation, Permutation), PermError> {
    if n <= 3 {
        return Err(PermError::Unsupported(
            "transpositions need at least four points",
        ));
    }
    if x == y || x >= n || y >= n {
        return Err(PermError::BadPin { from: x, to: y });
    }
    let mut rest = (0..n).filter(|&v| v != x && v != y);
    let a2 = rest.next().unwrap();
    let mut labels = vec![x, a2, y];
    labels.extend(rest);
    let sigma = Permutation::from_cycle(n, &labels)?;
    let tau = Permutation::from_cycle(n, &[labels[1], labels[3]])?;
    let d1 = compose(&tau, &sigma)?;
    let d2 = sigma.inverse();
    debug_assert!(d1.is_derangement() && d2.is_derangement());
    Ok((d1, d2))
}

/// Derangements listed in application order: `factors[0]` acts first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerangementFactorization {
    n: usize,
    factors: Vec<Permutation>,
}

impl DerangementFactorization {
    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `factors[k-1] ∘ ... ∘ factors[0]`.
    pub fn product(&self) -> Permutation {
        self.factors
            .iter()
            .fold(Permutation::identity(self.n), |acc, f| {
                compose(f, &acc).expect("factors share a domain")
            })
    }
}

/// Writes `p` as a product of at most four derangements.
pub fn factor_into_derangements(p: &Permutation) -> Result<DerangementFactorization, PermError> {
    let n = p.len();
    let factors = if p.is_identity() {
        vec![]
    } else if p.is_derangement() {
        vec![p.clone()]
    } else if n == 3 {
        // the only non-derangement, non-identity permutations of 3 points are transpositions
        return Err(PermError::NotFactorable);
    } else {
        match p.parity() {
            Parity::Even => {
                let (c1, c2) = even_to_two_ncycles(p)?;
                vec![c2, c1]
            }
            Parity::Odd => {
                // p = e ∘ (x p(x)) with e even
                let x = (0..n).find(|&i| p.apply(i) != i).unwrap();
                let t = Permutation::from_cycle(n, &[x, p.apply(x)])?;
                let even = compose(p, &t)?;
                let (d1, d2) = transposition_to_two_derangements(x, p.apply(x), n)?;
                let mut factors = vec![d1, d2];
                factors.extend(factor_into_derangements(&even)?.factors);
                factors
            }
        }
    };
    let out = DerangementFactorization { n, factors };
    debug_assert!(out.factors.iter().all(Permutation::is_derangement));
    debug_assert_eq!(out.product(), *p);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(n: usize, one_based: &[usize]) -> Permutation {
        let c: Vec<usize> = one_based.iter().map(|x| x - 1).collect();
        Permutation::from_cycle(n, &c).unwrap()
    }

    fn all_perms(n: usize) -> Vec<Permutation> {
        let mut v: Vec<usize> = (0..n).collect();
        let mut out = vec![Permutation::from_images(v.clone()).unwrap()];
        while next_permutation(&mut v) {
            out.push(Permutation::from_images(v.clone()).unwrap());
        }
        out
    }

    #[test]
    fn compose_right_to_left() {
        let tau = cyc(4, &[2, 4]);
        let sigma = cyc(4, &[1, 2, 3, 4]);
        let prod = compose(&tau, &sigma).unwrap();
        let expected = compose(&cyc(4, &[1, 4]), &cyc(4, &[2, 3])).unwrap();
        assert_eq!(prod, expected);
        assert!(prod.is_derangement());
        assert_eq!(compose(&prod, &Permutation::identity(4)).unwrap(), prod);
        assert!(compose(&prod, &prod.inverse()).unwrap().is_identity());
        assert!(matches!(
            compose(&prod, &Permutation::identity(3)),
            Err(PermError::DomainMismatch { left: 4, right: 3 })
        ));
    }

    #[test]
    fn basic_predicates() {
        assert_eq!(cyc(3, &[1, 2, 3]).parity(), Parity::Even);
        assert_eq!(cyc(3, &[2, 3]).parity(), Parity::Odd);
        assert!(cyc(4, &[1, 2, 3, 4]).is_derangement());
        assert!(!cyc(3, &[2, 3]).is_derangement());
        assert!(cyc(4, &[1, 3, 2, 4]).is_full_cycle());
        assert!(!compose(&cyc(4, &[1, 2]), &cyc(4, &[3, 4])).unwrap().is_full_cycle());
    }

    #[test]
    fn parse_and_format() {
        let p = Permutation::parse("2,1,4,3").unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 2]);
        assert_eq!(p.to_string(), "2,1,4,3");
        assert!(matches!(Permutation::parse("1,1"), Err(PermError::NotBijection(2))));
        assert!(matches!(Permutation::parse("0,1"), Err(PermError::Parse { .. })));
        assert!(matches!(Permutation::parse("a"), Err(PermError::Parse { .. })));
        assert!(matches!(Permutation::parse("1,3"), Err(PermError::NotBijection(2))));
    }

    #[test]
    fn make_derangement_examples() {
        let swap = make_derangement(4, &[1, 2], None).unwrap();
        assert_eq!(swap.images(), &[0, 2, 1, 3]);
        let pinned = make_derangement(3, &[0, 1, 2], Some((0, 1))).unwrap();
        assert_eq!(pinned.images(), &[1, 2, 0]);
        let pinned = make_derangement(3, &[0, 1, 2], Some((2, 0))).unwrap();
        assert_eq!(pinned.apply(2), 0);
        assert!(matches!(
            make_derangement(6, &[4], None),
            Err(PermError::TooSmall(1))
        ));
        assert!(matches!(
            make_derangement(3, &[0, 1, 2], Some((1, 1))),
            Err(PermError::BadPin { .. })
        ));
        assert!(matches!(
            make_derangement(4, &[0, 1, 2], Some((3, 1))),
            Err(PermError::BadPin { .. })
        ));
    }

    #[test]
    fn ncycle_examples() {
        let (c1, c2) = even_to_two_ncycles(&Permutation::identity(4)).unwrap();
        assert_eq!(c1, cyc(4, &[1, 2, 3, 4]));
        assert_eq!(c2, cyc(4, &[1, 4, 3, 2]));

        let (c1, c2) = even_to_two_ncycles(&cyc(3, &[1, 2, 3])).unwrap();
        assert_eq!(c1, cyc(3, &[1, 3, 2]));
        assert_eq!(c2, cyc(3, &[1, 3, 2]));

        let p = compose(&cyc(4, &[1, 2]), &cyc(4, &[3, 4])).unwrap();
        let (c1, c2) = even_to_two_ncycles(&p).unwrap();
        assert!(c1.is_full_cycle() && c2.is_full_cycle());
        assert_eq!(compose(&c1, &c2).unwrap(), p);

        assert_eq!(
            even_to_two_ncycles(&cyc(4, &[1, 2])),
            Err(PermError::OddPermutation)
        );
        assert!(matches!(
            even_to_two_ncycles(&Permutation::identity(1)),
            Err(PermError::Unsupported(_))
        ));
    }

    #[test]
    fn ncycles_exhaustive_small() {
        for n in 2..=6 {
            for p in all_perms(n).into_iter().filter(|p| p.parity() == Parity::Even) {
                let (c1, c2) = even_to_two_ncycles(&p).unwrap();
                assert!(c1.is_full_cycle() && c2.is_full_cycle());
                assert_eq!(compose(&c1, &c2).unwrap(), p);
            }
        }
    }

    #[test]
    fn transposition_examples() {
        let (d1, d2) = transposition_to_two_derangements(0, 2, 4).unwrap();
        assert_eq!(d1, compose(&cyc(4, &[1, 4]), &cyc(4, &[2, 3])).unwrap());
        assert_eq!(d2, cyc(4, &[1, 2, 3, 4]).inverse());
        assert_eq!(compose(&d2, &d1).unwrap(), cyc(4, &[1, 3]));

        let (d1, d2) = transposition_to_two_derangements(1, 3, 5).unwrap();
        assert!(d1.is_derangement() && d2.is_derangement());
        assert_eq!(compose(&d2, &d1).unwrap(), cyc(5, &[2, 4]));

        assert!(matches!(
            transposition_to_two_derangements(0, 1, 3),
            Err(PermError::Unsupported(_))
        ));
    }

    #[test]
    fn transpositions_exhaustive() {
        for n in 4..=9 {
            for x in 0..n {
                for y in 0..n {
                    if x == y {
                        continue;
                    }
                    let (d1, d2) = transposition_to_two_derangements(x, y, n).unwrap();
                    assert!(d1.is_derangement() && d2.is_derangement());
                    assert_eq!(
                        compose(&d2, &d1).unwrap(),
                        Permutation::from_cycle(n, &[x, y]).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn factorization_examples() {
        assert!(factor_into_derangements(&Permutation::identity(4))
            .unwrap()
            .is_empty());
        let dd = compose(&cyc(4, &[1, 2]), &cyc(4, &[3, 4])).unwrap();
        assert_eq!(factor_into_derangements(&dd).unwrap().factors(), std::slice::from_ref(&dd));
        let t = cyc(4, &[1, 3]);
        let f = factor_into_derangements(&t).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.product(), t);
        assert_eq!(
            factor_into_derangements(&cyc(3, &[1, 2])),
            Err(PermError::NotFactorable)
        );
        assert!(factor_into_derangements(&Permutation::identity(1))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn factorization_exhaustive_small() {
        for n in 1..=6 {
            for p in all_perms(n) {
                let result = factor_into_derangements(&p);
                if n == 3 && p.parity() == Parity::Odd {
                    assert_eq!(result, Err(PermError::NotFactorable));
                    continue;
                }
                let f = result.unwrap();
                assert!(f.len() <= 4);
                assert!(f.factors().iter().all(Permutation::is_derangement));
                assert_eq!(f.product(), p);
                assert_eq!(f.is_empty(), p.is_identity());
                if p.is_derangement() {
                    assert!(f.len() <= 1);
                }
                if p.parity() == Parity::Even {
                    assert!(f.len() <= 2);
                }
            }
        }
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n)
            .prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    fn arb_pair(max_n: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
        (1..=max_n).prop_flat_map(|n| {
            let v: Vec<usize> = (0..n).collect();
            (Just(v.clone()).prop_shuffle(), Just(v).prop_shuffle()).prop_map(|(a, b)| {
                (
                    Permutation::from_images(a).unwrap(),
                    Permutation::from_images(b).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn parity_is_a_homomorphism((p, q) in arb_pair(12)) {
            let pq = compose(&p, &q).unwrap();
            prop_assert_eq!(pq.parity(), p.parity().flip(q.parity()));
        }

        #[test]
        fn group_axioms((p, q) in arb_pair(10), r in arb_perm(10)) {
            let id = Permutation::identity(p.len());
            prop_assert_eq!(compose(&p, &id).unwrap(), p.clone());
            prop_assert_eq!(compose(&id, &p).unwrap(), p.clone());
            prop_assert!(compose(&p.inverse(), &p).unwrap().is_identity());
            if r.len() == p.len() {
                let left = compose(&compose(&p, &q).unwrap(), &r).unwrap();
                let right = compose(&p, &compose(&q, &r).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }
        }

        #[test]
        fn ncycles_certified_up_to_64(p in arb_perm(64)) {
            prop_assume!(p.len() >= 2 && p.parity() == Parity::Even);
            let (c1, c2) = even_to_two_ncycles(&p).unwrap();
            prop_assert!(c1.is_full_cycle() && c2.is_full_cycle());
            prop_assert_eq!(compose(&c1, &c2).unwrap(), p);
        }

        #[test]
        fn factorization_sampled(p in arb_perm(40)) {
            prop_assume!(p.len() != 3);
            let f = factor_into_derangements(&p).unwrap();
            prop_assert!(f.len() <= 4);
            prop_assert!(f.factors().iter().all(Permutation::is_derangement));
            prop_assert_eq!(f.product(), p);
        }

        #[test]
        fn format_parse_roundtrip(p in arb_perm(30)) {
            prop_assert_eq!(Permutation::parse(&p.to_string()).unwrap(), p);
        }
    }
}
