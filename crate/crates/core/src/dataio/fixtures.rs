use std::fmt;
use std::str::FromStr;

use super::text::{parse_joint, parse_table};
use crate::error::{Error, Result};
use crate::estimators::ContingencyTable;
use crate::population::JointDistribution;

/// Built-in datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// Artificial 5 x 7 table of multinomial counts, `n = 24`.
    Table1,
    /// Two treatments against four ordered ulcer outcomes, `n = 64`.
    Table2,
    /// Eight-atom metric law with negative `tau*`.
    CounterexampleR8,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixturePayload {
    Table(ContingencyTable),
    Joint(JointDistribution),
}

impl Fixture {
    pub const ALL: [Fixture; 3] = [Fixture::Table1, Fixture::Table2, Fixture::CounterexampleR8];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Table1 => "table1",
            Fixture::Table2 => "table2",
            Fixture::CounterexampleR8 => "counterexample_r8",
        }
    }

    /// File contents in the table or joint-law text format.
    pub fn text(self) -> &'static str {
        match self {
            Fixture::Table1 => include_str!("../../fixtures/table1.txt"),
            Fixture::Table2 => include_str!("../../fixtures/table2.txt"),
            Fixture::CounterexampleR8 => include_str!("../../fixtures/counterexample_r8.txt"),
        }
    }

    pub fn load(self) -> FixturePayload {
        match self {
            Fixture::Table1 | Fixture::Table2 => {
                FixturePayload::Table(parse_table(self.text()).expect("fixture text parses"))
            }
            Fixture::CounterexampleR8 => {
                FixturePayload::Joint(parse_joint(self.text()).expect("fixture text parses"))
            }
        }
    }

    /// The payload as a table, for the tabulated fixtures.
    pub fn table(self) -> Result<ContingencyTable> {
        match self.load() {
            FixturePayload::Table(t) => Ok(t),
            FixturePayload::Joint(_) => Err(Error::invalid(format!(
                "fixture '{}' is a joint law, not a table",
                self.name()
            ))),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown fixture '{s}' (expected table1, table2 or counterexample_r8)"
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::expand_table;
    use crate::population::{counterexample_r8, pop_tau_star};

    #[test]
    fn tables() {
        let t1 = Fixture::Table1.table().unwrap();
        assert_eq!((t1.rows(), t1.cols(), t1.total()), (5, 7, 24));
        assert_eq!(t1.count(4, 3), 2);
        let t2 = Fixture::Table2.table().unwrap();
        assert_eq!(t2.to_rows(), vec![vec![6, 4, 10, 12], vec![11, 8, 8, 5]]);
        let s = expand_table(&t2).unwrap();
        assert_eq!(s.len(), 64);
        assert_eq!(s.pairs().filter(|&p| p == (1.0, 1.0)).count(), 6);
    }

    #[test]
    fn counterexample_file_matches_construction() {
        let FixturePayload::Joint(j) = Fixture::CounterexampleR8.load() else {
            panic!("joint expected")
        };
        assert_eq!(j, counterexample_r8());
        assert_eq!(pop_tau_star(&j).unwrap(), -1.0 / 32.0);
    }

    #[test]
    fn names_round_trip() {
        for f in Fixture::ALL {
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
        }
        assert!("table3".parse::<Fixture>().is_err());
    }
}
