//! The bundled fixture library.

use crate::model::{parse_graph, GkmGraph, GraphError};

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../fixtures/", $name, ".json")))
    };
}

/// `(name, json)` for every bundled fixture.
pub const FIXTURES: &[(&str, &str)] = &[
    fixture!("sphere"),
    fixture!("octahedron"),
    fixture!("hp2-shell"),
    fixture!("cube2"),
    fixture!("cube3"),
    fixture!("cube4"),
    fixture!("cube5"),
    fixture!("cube3-projected"),
    fixture!("cube4-projected"),
    fixture!("cube5-projected"),
    fixture!("cp2"),
    fixture!("cp3"),
    fixture!("cp4"),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a bundled fixture. Panics on an unknown name.
pub fn load(name: &str) -> Result<GkmGraph, GraphError> {
    let text = source(name).unwrap_or_else(|| panic!("unknown fixture `{name}`"));
    parse_graph(text)
}
