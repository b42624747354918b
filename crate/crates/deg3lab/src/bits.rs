//! Small fixed-capacity bitset used by the tree path-length dynamic
//! programming, where sets of path lengths are dense and bounded by the
//! diameter.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LenBits {
    words: Vec<u64>,
}

impl LenBits {
    pub fn new(capacity: usize) -> LenBits {
        LenBits {
            words: vec![0; capacity / 64 + 1],
        }
    }

    #[allow(dead_code)] // exercised from tests
    pub fn capacity(&self) -> usize {
        self.words.len() * 64
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[allow(dead_code)] // exercised from tests
    pub fn contains(&self, i: usize) -> bool {
        i < self.capacity() && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &LenBits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// self |= other << shift. The caller guarantees capacity.
    pub fn or_shifted(&mut self, other: &LenBits, shift: usize) {
        let (wshift, bshift) = (shift / 64, shift % 64);
        for i in (0..other.words.len()).rev() {
            let w = other.words[i];
            if w == 0 {
                continue;
            }
            let lo = i + wshift;
            if lo < self.words.len() {
                self.words[lo] |= w << bshift;
            }
            if bshift > 0 && lo + 1 < self.words.len() {
                self.words[lo + 1] |= w >> (64 - bshift);
            }
        }
    }

    /// All pairwise sums a + b with a in self, b in other, ORed into `out`.
    pub fn sum_into(&self, other: &LenBits, out: &mut LenBits) {
        for a in self.iter() {
            out.or_shifted(other, a);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_set(&self) -> std::collections::BTreeSet<usize> {
        self.iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_union_and_sums() {
        let mut a = LenBits::new(10);
        a.insert(0);
        a.insert(3);
        let mut b = LenBits::new(70);
        b.insert(2);
        b.insert(65);
        let mut out = LenBits::new(80);
        a.sum_into(&b, &mut out);
        assert_eq!(out.to_set(), [2, 5, 65, 68].into_iter().collect());
    }

    #[test]
    fn iter_matches_contains() {
        let mut a = LenBits::new(200);
        for i in [0, 1, 63, 64, 127, 130, 199] {
            a.insert(i);
        }
        let got: Vec<usize> = a.iter().collect();
        assert_eq!(got, vec![0, 1, 63, 64, 127, 130, 199]);
        assert!(a.contains(64));
        assert!(!a.contains(65));
    }
}
