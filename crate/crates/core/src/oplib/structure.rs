//! Structure constants of the generalized Pauli basis.
//!
//! Commutators of two basis elements depend only on their kinds and on how
//! their index pairs overlap, so the full table is generated once by
//! commuting small dense matrices over Gaussian integers and decomposing the
//! result back into basis elements. This avoids hand-transcribing the many
//! shared-index cases; the textbook chain relations are asserted against the
//! table in the tests.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::pauli::{Kind, PauliElement};

/// Which canonical endpoint (of the two input elements) an output endpoint
/// refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    AJ,
    AK,
    BJ,
    BK,
}

/// Overlap pattern of two canonical (j < k) index pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Overlap {
    Disjoint,
    SamePair,
    JJ,
    JK,
    KJ,
    KK,
}

fn classify(a: (u32, u32), b: (u32, u32)) -> Overlap {
    if a == b {
        Overlap::SamePair
    } else if a.0 == b.0 {
        Overlap::JJ
    } else if a.0 == b.1 {
        Overlap::JK
    } else if a.1 == b.0 {
        Overlap::KJ
    } else if a.1 == b.1 {
        Overlap::KK
    } else {
        Overlap::Disjoint
    }
}

/// One output term of a tabulated commutator: `coeff` times the basis element
/// of `kind` whose endpoints sit in the given slots (before canonical
/// reorientation).
#[derive(Debug, Clone, Copy)]
struct TableEntry {
    coeff: i64,
    kind: Kind,
    j_slot: Slot,
    k_slot: Slot,
}

type Table = HashMap<(Kind, Kind, Overlap), Vec<TableEntry>>;

/// Gaussian-integer dense matrix on at most four local indices.
#[derive(Clone)]
struct Local {
    re: [[i64; 4]; 4],
    im: [[i64; 4]; 4],
}

impl Local {
    fn zero() -> Self {
        Self { re: [[0; 4]; 4], im: [[0; 4]; 4] }
    }

    fn element(kind: Kind, j: usize, k: usize) -> Self {
        let mut m = Self::zero();
        match kind {
            Kind::G => {
                m.re[j][k] = 1;
                m.re[k][j] = -1;
            }
            Kind::F => {
                m.im[j][k] = 1;
                m.im[k][j] = 1;
            }
            Kind::D => {
                m.im[j][j] = 1;
                m.im[k][k] = -1;
            }
        }
        m
    }

    fn commutator(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut re = 0i64;
                let mut im = 0i64;
                for t in 0..4 {
                    re += self.re[r][t] * other.re[t][c] - self.im[r][t] * other.im[t][c];
                    im += self.re[r][t] * other.im[t][c] + self.im[r][t] * other.re[t][c];
                    re -= other.re[r][t] * self.re[t][c] - other.im[r][t] * self.im[t][c];
                    im -= other.re[r][t] * self.im[t][c] + other.im[r][t] * self.re[t][c];
                }
                out.re[r][c] = re;
                out.im[r][c] = im;
            }
        }
        out
    }

    /// Decomposes an anti-Hermitian Gaussian matrix into (coeff, kind, j, k)
    /// triples over local indices.
    fn decompose(&self) -> Vec<(i64, Kind, usize, usize)> {
        let mut out = Vec::new();
        for j in 0..4 {
            for k in (j + 1)..4 {
                if self.re[j][k] != 0 {
                    out.push((self.re[j][k], Kind::G, j, k));
                }
                if self.im[j][k] != 0 {
                    out.push((self.im[j][k], Kind::F, j, k));
                }
            }
        }
        // Diagonal of a single-pair commutator is i·c(e_jj − e_kk).
        let diag: Vec<(usize, i64)> = (0..4)
            .filter_map(|t| {
                assert_eq!(self.re[t][t], 0, "diagonal must be imaginary");
                (self.im[t][t] != 0).then_some((t, self.im[t][t]))
            })
            .collect();
        match diag.as_slice() {
            [] => {}
            [(j, c1), (k, c2)] if *c1 == -*c2 => {
                out.push((*c1, Kind::D, *j, *k));
            }
            other => panic!("unexpected diagonal pattern {other:?}"),
        }
        out
    }
}

/// Concrete index instantiations per overlap pattern, chosen so that slots can
/// be recovered uniquely from the local indices.
fn instantiate(overlap: Overlap) -> ((usize, usize), (usize, usize)) {
    match overlap {
        Overlap::Disjoint => ((0, 1), (2, 3)),
        Overlap::SamePair => ((0, 1), (0, 1)),
        Overlap::JJ => ((0, 1), (0, 2)),
        Overlap::JK => ((2, 3), (0, 2)),
        Overlap::KJ => ((0, 1), (1, 2)),
        Overlap::KK => ((0, 2), (1, 2)),
    }
}

fn slot_of(overlap: Overlap, local: usize) -> Slot {
    let (a, b) = instantiate(overlap);
    // Prefer naming by the first operand; shared indices are equal anyway.
    if local == a.0 {
        Slot::AJ
    } else if local == a.1 {
        Slot::AK
    } else if local == b.0 {
        Slot::BJ
    } else if local == b.1 {
        Slot::BK
    } else {
        unreachable!("local index {local} not used by {overlap:?}")
    }
}

fn build_table() -> Table {
    let kinds = [Kind::G, Kind::F, Kind::D];
    let overlaps = [
        Overlap::Disjoint,
        Overlap::SamePair,
        Overlap::JJ,
        Overlap::JK,
        Overlap::KJ,
        Overlap::KK,
    ];
    let mut table = Table::new();
    for ka in kinds {
        for kb in kinds {
            for ov in overlaps {
                let (ia, ib) = instantiate(ov);
                let comm = Local::element(ka, ia.0, ia.1)
                    .commutator(&Local::element(kb, ib.0, ib.1));
                let entries = comm
                    .decompose()
                    .into_iter()
                    .map(|(coeff, kind, j, k)| TableEntry {
                        coeff,
                        kind,
                        j_slot: slot_of(ov, j),
                        k_slot: slot_of(ov, k),
                    })
                    .collect();
                table.insert((ka, kb, ov), entries);
            }
        }
    }
    table
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

/// Commutator `[a, b]` of two canonical basis elements as a list of
/// `(integer coefficient, element)` terms (at most two, already canonical).
pub fn commutator_table_entries(
    a: &PauliElement,
    b: &PauliElement,
) -> Vec<(i64, PauliElement)> {
    let ov = classify(a.endpoints(), b.endpoints());
    let entries = &table()[&(a.kind, b.kind, ov)];
    let resolve = |slot: Slot| -> u32 {
        match slot {
            Slot::AJ => a.j,
            Slot::AK => a.k,
            Slot::BJ => b.j,
            Slot::BK => b.k,
        }
    };
    entries
        .iter()
        .map(|e| {
            let (elem, sign) =
                PauliElement::canonical(e.kind, resolve(e.j_slot), resolve(e.k_slot))
                    .expect("table endpoints are distinct");
            (e.coeff * sign, elem)
        })
        .collect()
}
