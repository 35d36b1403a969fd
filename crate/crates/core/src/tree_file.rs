//! JSON tree documents: a `persons` array and a `bonds` array.
//!
//! ```json
//! {
//!   "persons": [{"id": "adam", "name": "Adam", "sex": "MALE", "birthdate": "01.02.1910"}],
//!   "bonds": [
//!     {"type": "parental", "parent": "adam", "child": "bob"},
//!     {"type": "marital", "a": "adam", "b": "eve", "wedding": "10.06.1935"}
//!   ]
//! }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{Bond, FamilyTree, MaritalBond, ParentalBond, Person, StructureError};
use crate::temporal::TimePoint;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDocument {
    persons: Vec<Person>,
    #[serde(default)]
    bonds: Vec<BondRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum BondRecord {
    Parental {
        parent: String,
        child: String,
    },
    Marital {
        a: String,
        b: String,
        wedding: TimePoint,
    },
}

#[derive(Debug, Error)]
pub enum TreeFileError {
    #[error("cannot read tree file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed tree document: {0}")]
    Format(#[from] serde_json::Error),
    #[error("inconsistent tree: {0}")]
    Structure(#[from] StructureError),
}

pub fn parse_tree(text: &str) -> Result<FamilyTree, TreeFileError> {
    let doc: TreeDocument = serde_json::from_str(text)?;
    let bonds = doc
        .bonds
        .into_iter()
        .map(|b| match b {
            BondRecord::Parental { parent, child } => {
                Bond::Parental(ParentalBond { parent, child })
            }
            BondRecord::Marital { a, b, wedding } => Bond::Marital(MaritalBond { a, b, wedding }),
        })
        .collect();
    Ok(FamilyTree::new(doc.persons, bonds)?)
}

pub fn load_tree(path: impl AsRef<Path>) -> Result<FamilyTree, TreeFileError> {
    parse_tree(&fs::read_to_string(path)?)
}

pub fn to_json(tree: &FamilyTree) -> String {
    let bonds = tree
        .bonds()
        .into_iter()
        .map(|b| match b {
            Bond::Parental(ParentalBond { parent, child }) => {
                BondRecord::Parental { parent, child }
            }
            Bond::Marital(MaritalBond { a, b, wedding }) => BondRecord::Marital { a, b, wedding },
        })
        .collect();
    let doc = TreeDocument {
        persons: tree.persons().to_vec(),
        bonds,
    };
    serde_json::to_string_pretty(&doc).expect("tree documents always serialize")
}
