use std::fmt;

use serde::{Deserialize, Serialize};

pub const ITEM_NAMES: [&str; 3] = ["book", "hat", "ball"];
pub const ITEM_PLURALS: [&str; 3] = ["books", "hats", "balls"];

/// Wire form of an item triple: either `{"book":1,"hat":4,"ball":1}` or `[1,4,1]`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ItemsRepr {
    Named { book: u32, hat: u32, ball: u32 },
    List([u32; 3]),
}

#[derive(Serialize)]
struct NamedItems {
    book: u32,
    hat: u32,
    ball: u32,
}

fn parse_triple(s: &str) -> Result<[u32; 3], String> {
    let mut out = [None; 3];
    for part in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected item=count, got {part:?}"))?;
        let k = k.trim().to_ascii_lowercase();
        let i = (0..3)
            .find(|&i| k == ITEM_NAMES[i] || k == ITEM_PLURALS[i])
            .ok_or_else(|| format!("unknown item {k:?}"))?;
        let n: u32 = v.trim().parse().map_err(|_| format!("bad count {v:?}"))?;
        if out[i].replace(n).is_some() {
            return Err(format!("{k} given twice"));
        }
    }
    match out {
        [Some(a), Some(b), Some(c)] => Ok([a, b, c]),
        _ => Err(format!("expected book, hat and ball counts in {s:?}")),
    }
}

macro_rules! item_triple {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
        pub struct $name(pub [u32; 3]);

        impl $name {
            pub fn new(book: u32, hat: u32, ball: u32) -> Self {
                Self([book, hat, ball])
            }

            pub fn get(&self, item: usize) -> u32 {
                self.0[item]
            }

            pub fn total(&self) -> u32 {
                self.0.iter().sum()
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                NamedItems { book: self.0[0], hat: self.0[1], ball: self.0[2] }.serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                Ok(match ItemsRepr::deserialize(d)? {
                    ItemsRepr::Named { book, hat, ball } => Self([book, hat, ball]),
                    ItemsRepr::List(xs) => Self(xs),
                })
            }
        }

        impl fmt::Display for $name {
            /// `book=1 hat=4 ball=1`
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "book={} hat={} ball={}", self.0[0], self.0[1], self.0[2])
            }
        }

        impl std::str::FromStr for $name {
            type Err = String;

            /// Parses `book=1 hat=4 ball=1`; commas and singular or plural names are accepted.
            fn from_str(s: &str) -> Result<Self, String> {
                parse_triple(s).map(Self)
            }
        }
    };
}

item_triple!(
    /// Item counts on the table.
    Pot
);
item_triple!(
    /// Item counts received by one player.
    Allocation
);
item_triple!(
    /// One player's private per-item values.
    ItemValues
);

impl Pot {
    /// Whether `alloc` fits inside the pot componentwise.
    pub fn contains(&self, alloc: &Allocation) -> bool {
        alloc.0.iter().zip(self.0.iter()).all(|(a, c)| a <= c)
    }

    /// What is left for the other player when one receives `alloc`.
    pub fn remainder(&self, alloc: &Allocation) -> Allocation {
        Allocation([
            self.0[0].saturating_sub(alloc.0[0]),
            self.0[1].saturating_sub(alloc.0[1]),
            self.0[2].saturating_sub(alloc.0[2]),
        ])
    }

    pub fn everything(&self) -> Allocation {
        Allocation(self.0)
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Number of distinct shares, Π(count + 1).
    pub fn split_count(&self) -> u64 {
        self.0.iter().map(|&c| c as u64 + 1).product()
    }
}

impl ItemValues {
    /// Value of the whole pot to this player.
    pub fn pot_value(&self, pot: &Pot) -> u32 {
        self.0.iter().zip(pot.0.iter()).map(|(v, c)| v * c).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_proposal_text() {
        assert_eq!("book=1 hat=4 ball=0".parse::<Allocation>().unwrap(), Allocation::new(1, 4, 0));
        assert_eq!("books=1, hats=2, balls=3".parse::<Allocation>().unwrap(), Allocation::new(1, 2, 3));
        assert!("book=1 hat=4".parse::<Allocation>().is_err());
        assert!("book=1 hat=4 ball=x".parse::<Allocation>().is_err());
    }

    #[test]
    fn wire_forms() {
        let pot = Pot::new(1, 4, 1);
        assert_eq!(serde_json::to_string(&pot).unwrap(), r#"{"book":1,"hat":4,"ball":1}"#);
        assert_eq!(serde_json::from_str::<Pot>("[1,4,1]").unwrap(), pot);
        assert_eq!(serde_json::from_str::<Pot>(r#"{"book":1,"hat":4,"ball":1}"#).unwrap(), pot);
        assert_eq!(pot.to_string(), "book=1 hat=4 ball=1");
    }

    #[test]
    fn remainder_and_bounds() {
        let pot = Pot::new(1, 4, 1);
        assert_eq!(pot.remainder(&Allocation::new(0, 3, 1)), Allocation::new(1, 1, 0));
        assert!(!pot.contains(&Allocation::new(0, 5, 0)));
        assert_eq!(pot.split_count(), 20);
        assert_eq!(ItemValues::new(4, 1, 2).pot_value(&pot), 10);
    }
}
