use std::fmt;

use serde::{Serialize, Serializer};

/// A nonempty set of players stored as a bitmask (bit `i` is player `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(u32);

impl Coalition {
    pub const MAX_PLAYERS: usize = 32;

    pub fn from_mask(mask: u32) -> Option<Self> {
        (mask != 0).then_some(Coalition(mask))
    }

    pub fn from_members(members: &[usize]) -> Option<Self> {
        let mut mask = 0u32;
        for &m in members {
            if m >= Self::MAX_PLAYERS {
                return None;
            }
            mask |= 1 << m;
        }
        Self::from_mask(mask)
    }

    pub fn singleton(player: usize) -> Self {
        Coalition(1 << player)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, player: usize) -> bool {
        player < Self::MAX_PLAYERS && self.0 & (1 << player) != 0
    }

    /// Members in ascending order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        })
    }

    pub fn member_vec(self) -> Vec<usize> {
        self.members().collect()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.members().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

/// Serialized as the 1-based member list.
impl Serialize for Coalition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<usize> = self.members().map(|i| i + 1).collect();
        v.serialize(s)
    }
}

/// All nonempty sub-coalitions of `players`, by size ascending and then
/// lexicographically by sorted member list.
pub fn coalitions_of(players: &[usize]) -> Vec<Coalition> {
    let mut out = Vec::new();
    for size in 1..=players.len() {
        subsets_of_size(players, size, &mut |members| {
            out.push(Coalition::from_members(members).expect("nonempty"));
        });
    }
    out
}

/// Calls `f` on each `size`-subset of `items` in lexicographic order of
/// positions.
pub fn subsets_of_size(items: &[usize], size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(
        items: &[usize],
        size: usize,
        from: usize,
        acc: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if acc.len() == size {
            f(acc);
            return;
        }
        let need = size - acc.len();
        for i in from..=items.len().saturating_sub(need) {
            if i >= items.len() {
                break;
            }
            acc.push(items[i]);
            rec(items, size, i + 1, acc, f);
            acc.pop();
        }
    }
    if size > items.len() {
        return;
    }
    let mut acc = Vec::with_capacity(size);
    rec(items, size, 0, &mut acc, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let cs: Vec<Vec<usize>> = coalitions_of(&[0, 1, 2])
            .into_iter()
            .map(|c| c.member_vec())
            .collect();
        assert_eq!(
            cs,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn count_is_two_to_the_n_minus_one() {
        for n in 1..=6 {
            let players: Vec<usize> = (0..n).collect();
            assert_eq!(coalitions_of(&players).len(), (1 << n) - 1);
        }
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(Coalition::from_members(&[0, 2]).unwrap().to_string(), "{1,3}");
        assert!(Coalition::from_members(&[]).is_none());
    }
}
