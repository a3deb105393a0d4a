//! Bundled extremal complexes.

use serde::Serialize;

use crate::complex::PolygonComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Side-pairing search over trivalent non-orientable gluings.
    PairingSearch,
    /// Produced from a seed by the grafting schedule.
    GraftingSchedule,
    /// Obtained from a low-index subgroup search.
    LowIndexSearch,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub file: &'static str,
    #[serde(skip)]
    pub source: &'static str,
    /// Expected `(k, g, N)`.
    pub expected: (u64, u64, u64),
    pub provenance: Provenance,
}

impl CatalogEntry {
    pub fn complex(&self) -> PolygonComplex {
        PolygonComplex::parse(self.source).expect("bundled catalog entry parses")
    }
}

macro_rules! entry {
    ($name:literal, $k:expr, $g:expr, $n:expr, $prov:expr) => {
        CatalogEntry {
            name: $name,
            file: concat!($name, ".cmplx"),
            source: include_str!(concat!("../catalog/", $name, ".cmplx")),
            expected: ($k, $g, $n),
            provenance: $prov,
        }
    };
}

pub fn entries() -> Vec<CatalogEntry> {
    use Provenance::*;
    vec![
        entry!("X7", 6, 3, 7, PairingSearch),
        entry!("X8", 3, 3, 8, PairingSearch),
        entry!("X9", 2, 3, 9, PairingSearch),
        entry!("X12", 1, 3, 12, PairingSearch),
        entry!("X10", 3, 4, 10, GraftingSchedule),
        entry!("X11", 6, 7, 11, GraftingSchedule),
        entry!("X15", 2, 5, 15, GraftingSchedule),
        // torsion-free subgroups of Δ±(3,3,9) and Δ±(3,3,7) read in Δ±(2,3,2r)
        entry!("D339", 1, 4, 18, LowIndexSearch),
        entry!("D337", 3, 6, 14, LowIndexSearch),
    ]
}

pub fn get(name: &str) -> Option<CatalogEntry> {
    entries().into_iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

/// The primitive seed complex with the given cell size.
pub fn seed(n: u64) -> Option<PolygonComplex> {
    entries()
        .into_iter()
        .find(|e| e.expected.2 == n && e.provenance == Provenance::PairingSearch)
        .map(|e| e.complex())
}
