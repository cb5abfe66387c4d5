//! Pointed algebraic theories with computable composition.
//!
//! Objects are the finite sums E^{vee n}, encoded by their rank; rank 0
//! is the null object. Three theory kinds are built in: finite pointed
//! sets (Gamma), free modules over Z/k, and free groups. Morphism
//! payloads are kept in canonical form so that equality is syntactic.

pub mod word;

pub use word::Word;

use crate::Error;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TheoryKind {
    /// Finite pointed sets; E = the pointed set {0, 1}.
    Gamma,
    /// Finitely generated free modules over Z/k.
    FreeMod(u64),
    /// Finitely generated free groups.
    FreeGroup,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Theory {
    kind: TheoryKind,
}

/// Morphism payload, canonical per theory kind:
/// pointed map tables for Gamma, row-major matrices mod k for FreeMod,
/// tuples of reduced words for FreeGroup.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Payload {
    /// Images of 1..=src in {0..=dst}; 0 is the basepoint.
    Gamma(Vec<usize>),
    /// dst x src matrix over Z/k, row-major.
    FreeMod(Vec<u64>),
    /// One reduced word (in dst letters) per source summand.
    FreeGroup(Vec<Word>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Morphism {
    src: usize,
    dst: usize,
    payload: Payload,
}

impl Morphism {
    pub fn src(&self) -> usize {
        self.src
    }

    pub fn dst(&self) -> usize {
        self.dst
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Gamma(t) => t.iter().all(|&v| v == 0),
            Payload::FreeMod(m) => m.iter().all(|&v| v == 0),
            Payload::FreeGroup(ws) => ws.iter().all(|w| w.is_empty()),
        }
    }

    /// Stable text key, used for reports and descriptors.
    pub fn key(&self) -> String {
        match &self.payload {
            Payload::Gamma(t) => format!(
                "g{}>{}:{}",
                self.src,
                self.dst,
                t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            ),
            Payload::FreeMod(m) => {
                let rows: Vec<String> = (0..self.dst)
                    .map(|i| {
                        (0..self.src)
                            .map(|j| m[i * self.src + j].to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                format!("m{}>{}:{}", self.src, self.dst, rows.join(";"))
            }
            Payload::FreeGroup(ws) => format!(
                "w{}>{}:{}",
                self.src,
                self.dst,
                ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(";")
            ),
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// Cogroup structure on E: a comultiplication and a coinversion.
/// (The coinversion is distinct from the switch map of E vee E.)
#[derive(Clone, Debug)]
pub struct CogroupStructure {
    pub comultiplication: Morphism,
    pub coinversion: Morphism,
}

impl Theory {
    pub fn gamma() -> Self {
        Theory { kind: TheoryKind::Gamma }
    }

    pub fn free_mod(k: u64) -> Self {
        assert!(k >= 2, "modulus must be at least 2");
        Theory { kind: TheoryKind::FreeMod(k) }
    }

    pub fn free_group() -> Self {
        Theory { kind: TheoryKind::FreeGroup }
    }

    pub fn kind(&self) -> TheoryKind {
        self.kind
    }

    pub fn has_finite_homs(&self) -> bool {
        !matches!(self.kind, TheoryKind::FreeGroup)
    }

    pub fn name(&self) -> String {
        match self.kind {
            TheoryKind::Gamma => "gamma".into(),
            TheoryKind::FreeMod(k) => format!("freemod{}", k),
            TheoryKind::FreeGroup => "freegroup".into(),
        }
    }

    pub fn identity(&self, n: usize) -> Morphism {
        match self.kind {
            TheoryKind::Gamma => Morphism {
                src: n,
                dst: n,
                payload: Payload::Gamma((1..=n).collect()),
            },
            TheoryKind::FreeMod(_) => {
                let mut m = vec![0u64; n * n];
                for i in 0..n {
                    m[i * n + i] = 1;
                }
                Morphism { src: n, dst: n, payload: Payload::FreeMod(m) }
            }
            TheoryKind::FreeGroup => Morphism {
                src: n,
                dst: n,
                payload: Payload::FreeGroup((1..=n).map(|i| Word::letter(i as i32)).collect()),
            },
        }
    }

    pub fn zero(&self, src: usize, dst: usize) -> Morphism {
        match self.kind {
            TheoryKind::Gamma => Morphism { src, dst, payload: Payload::Gamma(vec![0; src]) },
            TheoryKind::FreeMod(_) => Morphism {
                src,
                dst,
                payload: Payload::FreeMod(vec![0; src * dst]),
            },
            TheoryKind::FreeGroup => Morphism {
                src,
                dst,
                payload: Payload::FreeGroup(vec![Word::empty(); src]),
            },
        }
    }

    /// g after f.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism, Error> {
        if f.dst != g.src {
            return Err(Error::RankMismatch { expected: f.dst, found: g.src });
        }
        let payload = match (&g.payload, &f.payload) {
            (Payload::Gamma(gt), Payload::Gamma(ft)) => Payload::Gamma(
                ft.iter().map(|&v| if v == 0 { 0 } else { gt[v - 1] }).collect(),
            ),
            (Payload::FreeMod(gm), Payload::FreeMod(fm)) => {
                let k = match self.kind {
                    TheoryKind::FreeMod(k) => k,
                    _ => unreachable!(),
                };
                let (n, m, p) = (f.src, f.dst, g.dst);
                let mut out = vec![0u64; p * n];
                for i in 0..p {
                    for l in 0..m {
                        let a = gm[i * m + l];
                        if a == 0 {
                            continue;
                        }
                        for j in 0..n {
                            out[i * n + j] = (out[i * n + j] + a * fm[l * n + j]) % k;
                        }
                    }
                }
                Payload::FreeMod(out)
            }
            (Payload::FreeGroup(gw), Payload::FreeGroup(fw)) => {
                Payload::FreeGroup(fw.iter().map(|w| w.substitute(gw)).collect())
            }
            _ => return Err(Error::ShapeMismatch("mixed theory payloads".into())),
        };
        Ok(Morphism { src: f.src, dst: g.dst, payload })
    }

    /// Canonical injection i^n_k : E -> E^{vee n}, 1-based k.
    pub fn injection(&self, k: usize, n: usize) -> Result<Morphism, Error> {
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange(format!("injection {} of {}", k, n)));
        }
        Ok(match self.kind {
            TheoryKind::Gamma => Morphism { src: 1, dst: n, payload: Payload::Gamma(vec![k]) },
            TheoryKind::FreeMod(_) => {
                let mut m = vec![0u64; n];
                m[k - 1] = 1;
                Morphism { src: 1, dst: n, payload: Payload::FreeMod(m) }
            }
            TheoryKind::FreeGroup => Morphism {
                src: 1,
                dst: n,
                payload: Payload::FreeGroup(vec![Word::letter(k as i32)]),
            },
        })
    }

    /// Induced map E^{vee n} -> X from components E -> X.
    pub fn from_components(&self, parts: &[Morphism]) -> Result<Morphism, Error> {
        let dst = parts.first().map(|p| p.dst).unwrap_or(0);
        for p in parts {
            if p.src != 1 {
                return Err(Error::RankMismatch { expected: 1, found: p.src });
            }
            if p.dst != dst {
                return Err(Error::RankMismatch { expected: dst, found: p.dst });
            }
        }
        let n = parts.len();
        let payload = match self.kind {
            TheoryKind::Gamma => Payload::Gamma(
                parts
                    .iter()
                    .map(|p| match &p.payload {
                        Payload::Gamma(t) => t[0],
                        _ => unreachable!(),
                    })
                    .collect(),
            ),
            TheoryKind::FreeMod(_) => {
                let mut m = vec![0u64; dst * n];
                for (j, p) in parts.iter().enumerate() {
                    match &p.payload {
                        Payload::FreeMod(col) => {
                            for i in 0..dst {
                                m[i * n + j] = col[i];
                            }
                        }
                        _ => unreachable!(),
                    }
                }
                Payload::FreeMod(m)
            }
            TheoryKind::FreeGroup => Payload::FreeGroup(
                parts
                    .iter()
                    .map(|p| match &p.payload {
                        Payload::FreeGroup(ws) => ws[0].clone(),
                        _ => unreachable!(),
                    })
                    .collect(),
            ),
        };
        Ok(Morphism { src: n, dst, payload })
    }

    /// Component f i^n_k of a morphism out of E^{vee n}, 1-based k.
    pub fn component(&self, f: &Morphism, k: usize) -> Morphism {
        assert!(k >= 1 && k <= f.src);
        let payload = match &f.payload {
            Payload::Gamma(t) => Payload::Gamma(vec![t[k - 1]]),
            Payload::FreeMod(m) => {
                Payload::FreeMod((0..f.dst).map(|i| m[i * f.src + (k - 1)]).collect())
            }
            Payload::FreeGroup(ws) => Payload::FreeGroup(vec![ws[k - 1].clone()]),
        };
        Morphism { src: 1, dst: f.dst, payload }
    }

    /// Canonical retraction r^n_k : E^{vee n} -> E.
    pub fn retraction(&self, k: usize, n: usize) -> Result<Morphism, Error> {
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange(format!("retraction {} of {}", k, n)));
        }
        let parts: Vec<Morphism> = (1..=n)
            .map(|p| if p == k { self.identity(1) } else { self.zero(1, 1) })
            .collect();
        self.from_components(&parts)
    }

    /// Folding map E^{vee n} -> E.
    pub fn fold(&self, n: usize) -> Morphism {
        let parts = vec![self.identity(1); n];
        self.from_components(&parts).expect("components share codomain")
    }

    /// The switch of E vee E.
    pub fn switch(&self) -> Morphism {
        self.block_switch(1, 1)
    }

    /// Block switch E^{vee(a+b)} -> E^{vee(b+a)}.
    pub fn block_switch(&self, a: usize, b: usize) -> Morphism {
        let n = a + b;
        let parts: Vec<Morphism> = (1..=n)
            .map(|p| {
                let target = if p <= a { b + p } else { p - a };
                self.injection(target, n).unwrap()
            })
            .collect();
        self.from_components(&parts).unwrap()
    }

    /// Block injection E^{vee len} -> E^{vee total} starting at offset.
    pub fn block_injection(&self, len: usize, total: usize, offset: usize) -> Morphism {
        assert!(offset + len <= total);
        if len == 0 {
            return self.zero(0, total);
        }
        let parts: Vec<Morphism> = (1..=len)
            .map(|p| self.injection(offset + p, total).unwrap())
            .collect();
        self.from_components(&parts).unwrap()
    }

    /// Block retraction E^{vee total} -> E^{vee len}: identity on the
    /// block starting at offset, zero elsewhere.
    pub fn block_retraction(&self, len: usize, total: usize, offset: usize) -> Morphism {
        assert!(offset + len <= total);
        let parts: Vec<Morphism> = (1..=total)
            .map(|p| {
                if p > offset && p <= offset + len {
                    self.injection(p - offset, len).unwrap()
                } else {
                    self.zero(1, len)
                }
            })
            .collect();
        self.from_components(&parts).unwrap()
    }

    /// Drops summand k: E^{vee n} -> E^{vee(n-1)}.
    pub fn drop_summand(&self, n: usize, k: usize) -> Morphism {
        assert!(k >= 1 && k <= n);
        let parts: Vec<Morphism> = (1..=n)
            .map(|p| {
                if p < k {
                    self.injection(p, n - 1).unwrap()
                } else if p == k {
                    self.zero(1, n - 1)
                } else {
                    self.injection(p - 1, n - 1).unwrap()
                }
            })
            .collect();
        self.from_components(&parts).unwrap()
    }

    /// Coproduct of morphisms, f vee g.
    pub fn coproduct(&self, f: &Morphism, g: &Morphism) -> Morphism {
        let dst = f.dst + g.dst;
        let mut parts = Vec::with_capacity(f.src + g.src);
        let left = self.block_injection(f.dst, dst, 0);
        let right = self.block_injection(g.dst, dst, f.dst);
        for k in 1..=f.src {
            parts.push(self.compose(&left, &self.component(f, k)).unwrap());
        }
        for k in 1..=g.src {
            parts.push(self.compose(&right, &self.component(g, k)).unwrap());
        }
        self.from_components(&parts).unwrap()
    }

    /// Number of morphisms E^{vee n} -> E^{vee m}; None when infinite.
    pub fn hom_count(&self, n: usize, m: usize) -> Option<u128> {
        match self.kind {
            TheoryKind::Gamma => Some(((m + 1) as u128).pow(n as u32)),
            TheoryKind::FreeMod(k) => Some((k as u128).pow((n * m) as u32)),
            TheoryKind::FreeGroup => {
                if n == 0 || m == 0 {
                    Some(1)
                } else {
                    None
                }
            }
        }
    }

    /// Complete, duplicate-free, deterministic enumeration of
    /// hom(E^{vee n}, E^{vee m}). The zero morphism comes first.
    pub fn enumerate_homs(&self, n: usize, m: usize) -> Result<Vec<Morphism>, Error> {
        match self.kind {
            TheoryKind::Gamma => {
                let mut out = Vec::new();
                let mut table = vec![0usize; n];
                loop {
                    out.push(Morphism { src: n, dst: m, payload: Payload::Gamma(table.clone()) });
                    // odometer increment, least significant last
                    let mut i = n;
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        if table[i] < m {
                            table[i] += 1;
                            for v in table.iter_mut().skip(i + 1) {
                                *v = 0;
                            }
                            break;
                        }
                    }
                }
            }
            TheoryKind::FreeMod(k) => {
                let mut out = Vec::new();
                let mut entries = vec![0u64; n * m];
                loop {
                    out.push(Morphism {
                        src: n,
                        dst: m,
                        payload: Payload::FreeMod(entries.clone()),
                    });
                    let mut i = n * m;
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        if entries[i] + 1 < k {
                            entries[i] += 1;
                            for v in entries.iter_mut().skip(i + 1) {
                                *v = 0;
                            }
                            break;
                        }
                    }
                }
            }
            TheoryKind::FreeGroup => {
                if n == 0 || m == 0 {
                    Ok(vec![self.zero(n, m)])
                } else {
                    Err(Error::InfiniteHomSet)
                }
            }
        }
    }

    pub fn enumerate_nonzero_homs(&self, n: usize, m: usize) -> Result<Vec<Morphism>, Error> {
        Ok(self
            .enumerate_homs(n, m)?
            .into_iter()
            .filter(|f| !f.is_zero())
            .collect())
    }

    /// Cogroup structure on E; only free groups carry one here.
    pub fn cogroup_ops(&self) -> Result<CogroupStructure, Error> {
        match self.kind {
            TheoryKind::FreeGroup => Ok(CogroupStructure {
                comultiplication: Morphism {
                    src: 1,
                    dst: 2,
                    payload: Payload::FreeGroup(vec![Word::from_letters([1, 2])]),
                },
                coinversion: Morphism {
                    src: 1,
                    dst: 1,
                    payload: Payload::FreeGroup(vec![Word::letter(-1)]),
                },
            }),
            _ => Err(Error::NoCogroupStructure),
        }
    }

    /// Group law f bullet g = (f, g) mu on a hom-set of a cogroup theory.
    pub fn bullet(&self, f: &Morphism, g: &Morphism) -> Result<Morphism, Error> {
        self.cogroup_ops()?;
        if f.src != g.src || f.dst != g.dst {
            return Err(Error::ShapeMismatch("bullet needs parallel morphisms".into()));
        }
        match (&f.payload, &g.payload) {
            (Payload::FreeGroup(fw), Payload::FreeGroup(gw)) => Ok(Morphism {
                src: f.src,
                dst: f.dst,
                payload: Payload::FreeGroup(
                    fw.iter().zip(gw).map(|(a, b)| a.concat(b)).collect(),
                ),
            }),
            _ => Err(Error::NoCogroupStructure),
        }
    }

    /// Inverse for the bullet law, f tau.
    pub fn bullet_inverse(&self, f: &Morphism) -> Result<Morphism, Error> {
        self.cogroup_ops()?;
        match &f.payload {
            Payload::FreeGroup(fw) => Ok(Morphism {
                src: f.src,
                dst: f.dst,
                payload: Payload::FreeGroup(fw.iter().map(|w| w.inverse()).collect()),
            }),
            _ => Err(Error::NoCogroupStructure),
        }
    }

    /// Morphism E -> E^{vee m} from a single word.
    pub fn word_morphism(&self, w: Word, dst: usize) -> Result<Morphism, Error> {
        if !matches!(self.kind, TheoryKind::FreeGroup) {
            return Err(Error::NoCogroupStructure);
        }
        if w.max_letter() > dst {
            return Err(Error::RankMismatch { expected: dst, found: w.max_letter() });
        }
        Ok(Morphism { src: 1, dst, payload: Payload::FreeGroup(vec![w]) })
    }

    /// Morphism E^{vee n} -> E^{vee m} from one word per source summand.
    pub fn words_morphism(&self, ws: Vec<Word>, dst: usize) -> Result<Morphism, Error> {
        if !matches!(self.kind, TheoryKind::FreeGroup) {
            return Err(Error::NoCogroupStructure);
        }
        for w in &ws {
            if w.max_letter() > dst {
                return Err(Error::RankMismatch { expected: dst, found: w.max_letter() });
            }
        }
        Ok(Morphism { src: ws.len(), dst, payload: Payload::FreeGroup(ws) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theories() -> Vec<Theory> {
        vec![Theory::gamma(), Theory::free_mod(2), Theory::free_mod(3)]
    }

    #[test]
    fn hom_counts() {
        let g = Theory::gamma();
        assert_eq!(g.enumerate_homs(1, 1).unwrap().len(), 2);
        assert_eq!(g.enumerate_homs(1, 2).unwrap().len(), 3);
        let f2 = Theory::free_mod(2);
        assert_eq!(f2.enumerate_homs(1, 2).unwrap().len(), 4);
        assert!(Theory::free_group().enumerate_homs(1, 1).is_err());
        assert_eq!(Theory::free_group().enumerate_homs(0, 3).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_deterministic_and_duplicate_free() {
        for t in theories() {
            let homs = t.enumerate_homs(2, 2).unwrap();
            let again = t.enumerate_homs(2, 2).unwrap();
            assert_eq!(homs, again);
            for i in 0..homs.len() {
                for j in i + 1..homs.len() {
                    assert_ne!(homs[i], homs[j]);
                }
            }
            assert!(homs[0].is_zero());
        }
    }

    #[test]
    fn injection_retraction_identities() {
        for t in theories().into_iter().chain([Theory::free_group()]) {
            for n in 1..=4usize {
                for k in 1..=n {
                    let i = t.injection(k, n).unwrap();
                    for p in 1..=n {
                        let r = t.retraction(p, n).unwrap();
                        let c = t.compose(&r, &i).unwrap();
                        if p == k {
                            assert_eq!(c, t.identity(1));
                        } else {
                            assert!(c.is_zero());
                        }
                    }
                    assert_eq!(t.compose(&t.fold(n), &i).unwrap(), t.identity(1));
                }
            }
            let sw = t.switch();
            assert_eq!(t.compose(&sw, &sw).unwrap(), t.identity(2));
            assert_eq!(
                t.compose(&t.fold(2), &sw).unwrap(),
                t.fold(2),
                "fold is symmetric"
            );
            assert!(t.injection(0, 2).is_err());
            assert!(t.retraction(3, 2).is_err());
        }
    }

    #[test]
    fn fold_is_all_ones_for_freemod() {
        let t = Theory::free_mod(2);
        let f = t.fold(3);
        assert_eq!(f.payload(), &Payload::FreeMod(vec![1, 1, 1]));
    }

    #[test]
    fn composition_associative_exhaustive() {
        for t in theories() {
            let homs01: Vec<_> = t.enumerate_homs(1, 1).unwrap();
            let homs12: Vec<_> = t.enumerate_homs(1, 2).unwrap();
            let homs21: Vec<_> = t.enumerate_homs(2, 1).unwrap();
            for f in &homs01 {
                for g in &homs12 {
                    for h in &homs21 {
                        let a = t
                            .compose(h, &t.compose(g, f).unwrap())
                            .unwrap();
                        let b = t
                            .compose(&t.compose(h, g).unwrap(), f)
                            .unwrap();
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_absorbs() {
        for t in theories() {
            for f in t.enumerate_homs(1, 2).unwrap() {
                let z = t.zero(2, 1);
                assert!(t.compose(&z, &f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn rank_mismatch_rejected() {
        let t = Theory::gamma();
        let f = t.identity(2);
        let g = t.identity(3);
        assert!(matches!(
            t.compose(&g, &f),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn from_components_round_trip() {
        for t in theories().into_iter().chain([Theory::free_group()]) {
            let id = t.identity(2);
            let parts: Vec<_> = (1..=2).map(|k| t.component(&id, k)).collect();
            assert_eq!(t.from_components(&parts).unwrap(), id);
            let z = t.from_components(&[t.zero(1, 1), t.zero(1, 1)]).unwrap();
            assert!(z.is_zero());
        }
        // Gamma: components (1 -> x, 1 -> x) give the fold-through map
        let t = Theory::gamma();
        let x = t.identity(1);
        let ff = t.from_components(&[x.clone(), x]).unwrap();
        assert_eq!(ff, t.fold(2));
    }

    #[test]
    fn free_group_substitution() {
        let t = Theory::free_group();
        let f = t.word_morphism(Word::from_letters([1, 2]), 2).unwrap();
        let g = t
            .words_morphism(
                vec![Word::from_letters([1, 2]), Word::from_letters([-2])],
                2,
            )
            .unwrap();
        let c = t.compose(&g, &f).unwrap();
        assert_eq!(c, t.word_morphism(Word::letter(1), 2).unwrap());
    }

    #[test]
    fn cogroup_laws() {
        let t = Theory::free_group();
        let ops = t.cogroup_ops().unwrap();
        // counit law: r1 mu = id = r2 mu
        for k in 1..=2 {
            let r = t.retraction(k, 2).unwrap();
            assert_eq!(t.compose(&r, &ops.comultiplication).unwrap(), t.identity(1));
        }
        // i1 bullet i2 is the word ab in hom(E, E vee E)
        let i1 = t.injection(1, 2).unwrap();
        let i2 = t.injection(2, 2).unwrap();
        let b = t.bullet(&i1, &i2).unwrap();
        assert_eq!(b, t.word_morphism(Word::from_letters([1, 2]), 2).unwrap());
        assert!(Theory::gamma().cogroup_ops().is_err());
    }

    #[test]
    fn bullet_group_laws_on_words() {
        use rand::{Rng, SeedableRng};
        let t = Theory::free_group();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let rand_word = |rng: &mut rand_chacha::ChaCha8Rng| {
            let len = rng.gen_range(0..=6);
            Word::from_letters((0..len).map(|_| {
                let l = rng.gen_range(1..=2i32);
                if rng.gen_bool(0.5) {
                    l
                } else {
                    -l
                }
            }))
        };
        for _ in 0..50 {
            let f = t.word_morphism(rand_word(&mut rng), 2).unwrap();
            let g = t.word_morphism(rand_word(&mut rng), 2).unwrap();
            let h = t.word_morphism(rand_word(&mut rng), 2).unwrap();
            let zero = t.zero(1, 2);
            assert_eq!(t.bullet(&f, &zero).unwrap(), f);
            assert_eq!(t.bullet(&zero, &f).unwrap(), f);
            assert!(t.bullet(&f, &t.bullet_inverse(&f).unwrap()).unwrap().is_zero());
            let ab = t.bullet(&t.bullet(&f, &g).unwrap(), &h).unwrap();
            let ba = t.bullet(&f, &t.bullet(&g, &h).unwrap()).unwrap();
            assert_eq!(ab, ba);
            // postcomposition is a homomorphism for bullet
            let post = t
                .words_morphism(vec![rand_word(&mut rng), rand_word(&mut rng)], 2)
                .unwrap();
            let lhs = t.compose(&post, &t.bullet(&f, &g).unwrap()).unwrap();
            let rhs = t
                .bullet(
                    &t.compose(&post, &f).unwrap(),
                    &t.compose(&post, &g).unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn block_maps() {
        for t in theories() {
            let sw = t.block_switch(1, 2);
            let back = t.block_switch(2, 1);
            assert_eq!(t.compose(&back, &sw).unwrap(), t.identity(3));
            let r = t.block_retraction(2, 3, 1);
            let i = t.block_injection(2, 3, 1);
            assert_eq!(t.compose(&r, &i).unwrap(), t.identity(2));
            let d = t.drop_summand(3, 2);
            let inj2 = t.injection(2, 3).unwrap();
            assert!(t.compose(&d, &inj2).unwrap().is_zero());
        }
    }
}
