//! The six proof steps, executed in exact arithmetic.

use std::collections::BTreeMap;

use crate::drives::{
    drive_w2y, drive_w2z, ladder_coefficient, sigma_pm, Circular,
};
use crate::exact::{rational_from_i64, RadicalNumber, Sign};
use crate::oplib::{
    subsystem_dim, Block, DriftSpec, ExactOperator, Kind, PauliElement, StateIndex,
};

use super::graph::TransitionGraph;
use super::vandermonde::isolate_ladder;
use super::{IsolatedSet, ProofError, ProofReport, StepReport, StepTag};

/// Everything a proof run produces: the report, the isolated elements with
/// provenance, and a transition-graph snapshot after each step.
#[derive(Debug, Clone)]
pub struct ProofOutcome {
    pub report: ProofReport,
    pub isolated: IsolatedSet,
    pub graphs: Vec<(StepTag, TransitionGraph)>,
}

struct Executor<'a> {
    j: u32,
    dim: u32,
    drift: &'a DriftSpec,
    isolated: IsolatedSet,
    /// Step-3 groups keyed by the M they are centered on.
    groups: BTreeMap<i64, ExactOperator>,
}

impl<'a> Executor<'a> {
    fn new(j: u32, drift: &'a DriftSpec) -> Self {
        Self {
            j,
            dim: subsystem_dim(j),
            drift,
            isolated: IsolatedSet::new(),
            groups: BTreeMap::new(),
        }
    }

    fn unit(&self, elem: PauliElement) -> ExactOperator {
        ExactOperator::single(self.dim, elem, RadicalNumber::one())
    }

    /// Canonical `G` element between `(τ, m)` and `(upper, m_up)`.
    fn g_cross(&self, upper: Block, m: i64, m_up: i64) -> Result<PauliElement, ProofError> {
        let (e, sign) = PauliElement::from_states(
            Kind::G,
            self.j,
            StateIndex::new(Block::Tau, m),
            StateIndex::new(upper, m_up),
        )?;
        debug_assert_eq!(sign, 1, "τ-block flats precede upper blocks");
        Ok(e)
    }

    /// `[[a, q], q]` for a unit probe element `q`.
    fn double_commutator(
        &self,
        a: &ExactOperator,
        probe: PauliElement,
    ) -> Result<ExactOperator, ProofError> {
        let q = self.unit(probe);
        Ok(a.commutator(&q)?.commutator(&q)?)
    }

    fn expect_single(
        op: &ExactOperator,
        context: &str,
    ) -> Result<(PauliElement, RadicalNumber), ProofError> {
        op.as_single().ok_or_else(|| ProofError::NotSingle {
            context: context.into(),
            got: format!("{op}"),
        })
    }

    /// Drops every term whose basis element is already isolated.
    fn minus_known(&self, op: &ExactOperator) -> ExactOperator {
        let mut reduced = op.clone();
        reduced.split_off_where(|e| self.isolated.contains(e));
        reduced
    }

    fn isolate_single(
        &mut self,
        op: &ExactOperator,
        expected: PauliElement,
        tag: StepTag,
        context: &str,
    ) -> Result<(), ProofError> {
        let (elem, _) = Self::expect_single(op, context)?;
        if elem != expected {
            return Err(ProofError::UnexpectedOperator {
                context: context.into(),
                expected: expected.to_string(),
                got: elem.to_string(),
            });
        }
        self.isolated.insert(elem, tag)
    }

    /// Step 1: both circular combinations collapse to single ladders whose
    /// rungs are separated by the Vandermonde inversion.
    fn step1(&mut self) -> Result<(), ProofError> {
        for which in [Circular::Plus, Circular::Minus] {
            let sigma = sigma_pm(self.j, self.drift, which)?;
            for rung in isolate_ladder(&sigma, self.drift)? {
                let (elem, _) = Self::expect_single(&rung, "circular ladder rung")?;
                self.isolated.insert(elem, StepTag::Step1)?;
            }
        }
        Ok(())
    }

    /// Step 2: the M-conserving drive separates into ±M pairs; double
    /// commutators against the τ↔τ′ ladder split each pair.
    fn step2(&mut self) -> Result<(), ProofError> {
        let w2z = drive_w2z(self.j);
        for group in isolate_ladder(&w2z, self.drift)? {
            if let Some((elem, _)) = group.as_single() {
                self.isolated.insert(elem, StepTag::Step2)?;
                continue;
            }
            // ±M pair: split with the ascending τ↔τ′ element at the positive M
            let m = group
                .terms()
                .map(|(e, _)| StateIndex::from_flat(self.j, e.j).unwrap().m)
                .max()
                .expect("group is nonempty");
            let probe = self.g_cross(Block::TauPrime, m, m + 1)?;
            let split = self.double_commutator(&group, probe)?;
            // exact postcondition: the double commutator negates the member
            // that shares a state with the probe and annihilates the rest
            let positive = self.g_cross(Block::TauDoublePrime, m, m)?;
            let expected = -&ExactOperator::single(
                self.dim,
                positive,
                group.coefficient(&positive),
            );
            if split != expected {
                return Err(ProofError::UnexpectedOperator {
                    context: "diagonal pair split".into(),
                    expected: format!("{expected}"),
                    got: format!("{split}"),
                });
            }
            self.isolated.insert(positive, StepTag::Step2)?;
            let rest = self.minus_known(&group);
            let negative = self.g_cross(Block::TauDoublePrime, -m, -m)?;
            self.isolate_single(&rest, negative, StepTag::Step2, "diagonal pair remainder")?;
        }
        Ok(())
    }

    /// Expected step-3 group centered on M, assembled from the ladder
    /// coefficient formulas (three terms at the edges, four inside).
    fn expected_group(&self, m: i64) -> Result<ExactOperator, ProofError> {
        let j = i64::from(self.j);
        let tpp = Block::TauDoublePrime;
        let mut op = ExactOperator::zero(self.dim);
        let up = |mm: i64| ladder_coefficient(self.j, mm, Sign::Plus);
        let down = |mm: i64| ladder_coefficient(self.j, mm, Sign::Minus);
        op.add_term(self.g_cross(tpp, m, m + 1)?, up(m).scaled(&rational_from_i64(-1)));
        op.add_term(self.g_cross(tpp, m, m - 1)?, down(m));
        if m > -j {
            op.add_term(
                self.g_cross(tpp, m - 1, m)?,
                up(m - 1).scaled(&rational_from_i64(-1)),
            );
        }
        if m < j {
            op.add_term(self.g_cross(tpp, m + 1, m)?, down(m + 1));
        }
        Ok(op)
    }

    /// Step 3: double commutators of the remaining τ↔τ″ drive against each
    /// isolated diagonal produce one group per M; the closed-form group
    /// expressions are
    /// asserted exactly.
    fn step3(&mut self) -> Result<(), ProofError> {
        let w2y = drive_w2y(self.j);
        for m in -i64::from(self.j)..=i64::from(self.j) {
            let diag = self.g_cross(Block::TauDoublePrime, m, m)?;
            let group = self.double_commutator(&w2y.op, diag)?;
            let expected = self.expected_group(m)?;
            if group != expected {
                return Err(ProofError::UnexpectedOperator {
                    context: format!("group at M={m}"),
                    expected: format!("{expected}"),
                    got: format!("{group}"),
                });
            }
            self.groups.insert(m, group);
        }
        Ok(())
    }

    /// Step 4: base of the induction — the groups at M = −J and M = −J+1 are
    /// resolved into their individual elements.
    fn step4(&mut self) -> Result<(), ProofError> {
        if self.j == 0 {
            return Ok(()); // no ladder below the edge; nothing to resolve
        }
        let j = i64::from(self.j);
        let tpp = Block::TauDoublePrime;
        let x_bottom = self.groups[&-j].clone();
        let x_next = self.groups[&(-j + 1)].clone();

        let e1 = self.double_commutator(&x_bottom, self.g_cross(Block::TauPrime, -j + 1, -j + 2)?)?;
        self.isolate_single(&e1, self.g_cross(tpp, -j + 1, -j)?, StepTag::Step4, "base element 1")?;

        let e2 = self.double_commutator(&x_next, self.g_cross(Block::TauPrime, -j, -j - 1)?)?;
        self.isolate_single(&e2, self.g_cross(tpp, -j, -j + 1)?, StepTag::Step4, "base element 2")?;

        let e3 = self.double_commutator(&x_next, self.g_cross(Block::TauPrime, -j + 2, -j + 3)?)?;
        self.isolate_single(&e3, self.g_cross(tpp, -j + 2, -j + 1)?, StepTag::Step4, "base element 3")?;

        let e4 = self.minus_known(&x_next);
        self.isolate_single(&e4, self.g_cross(tpp, -j + 1, -j + 2)?, StepTag::Step4, "base remainder")?;

        let e5 = self.minus_known(&x_bottom);
        self.isolate_single(&e5, self.g_cross(tpp, -j, -j - 1)?, StepTag::Step4, "edge remainder")?;
        Ok(())
    }

    /// Step 5: inductive sweep over M, finishing with the top-edge
    /// subtraction.
    fn step5(&mut self) -> Result<(), ProofError> {
        if self.j == 0 {
            return Ok(());
        }
        let j = i64::from(self.j);
        let tpp = Block::TauDoublePrime;
        for m in (-j + 1)..=(j - 2) {
            let reduced = self.minus_known(&self.groups[&(m + 1)].clone());
            if reduced.num_terms() != 2 {
                return Err(ProofError::UnexpectedOperator {
                    context: format!("inductive remainder at M={}", m + 1),
                    expected: "two unresolved elements".into(),
                    got: format!("{reduced}"),
                });
            }
            let iso_a =
                self.double_commutator(&reduced, self.g_cross(Block::TauPrime, m + 2, m + 3)?)?;
            self.isolate_single(
                &iso_a,
                self.g_cross(tpp, m + 2, m + 1)?,
                StepTag::Step5,
                "inductive element (descending)",
            )?;
            let iso_b =
                self.double_commutator(&reduced, self.g_cross(Block::TauPrime, m + 1, m)?)?;
            self.isolate_single(
                &iso_b,
                self.g_cross(tpp, m + 1, m + 2)?,
                StepTag::Step5,
                "inductive element (ascending)",
            )?;
        }
        let top = self.minus_known(&self.groups[&j].clone());
        self.isolate_single(&top, self.g_cross(tpp, j, j + 1)?, StepTag::Step5, "top edge")?;
        Ok(())
    }

    /// The `F` partner of an isolated cross-block `G`, produced by the drift
    /// commutator; exact because the block spacing is a nonzero rational.
    fn f_partner(&self, g: PauliElement) -> Result<PauliElement, ProofError> {
        let rotated = self.drift.commute_drift(&self.unit(g));
        let (elem, _) = Self::expect_single(&rotated, "drift rotation of G")?;
        if elem.kind != Kind::F || elem.endpoints() != g.endpoints() {
            return Err(ProofError::UnexpectedOperator {
                context: "drift rotation of G".into(),
                expected: format!("F[{},{}]", g.j, g.k),
                got: elem.to_string(),
            });
        }
        Ok(elem)
    }

    /// Step 6: connectivity, then pairwise generation of the full basis.
    fn step6(&mut self) -> Result<(), ProofError> {
        let n = self.dim;
        let graph = TransitionGraph::from_isolated(self.j, &self.isolated, StepTag::Step5);
        if !graph.is_connected() {
            let components = graph
                .components()
                .into_iter()
                .map(|c| {
                    c.into_iter()
                        .map(|v| StateIndex::from_flat(self.j, v).unwrap().to_string())
                        .collect()
                })
                .collect();
            return Err(ProofError::Disconnected(components));
        }

        // F partners of everything isolated so far (all cross-block pairs).
        let held: Vec<PauliElement> =
            self.isolated.iter().map(|(e, _)| *e).collect();
        for g in held {
            let f = self.f_partner(g)?;
            self.isolated.insert(f, StepTag::Step6)?;
        }

        // G on every pair {0, v} by folding commutators along BFS tree paths.
        let parents = graph.bfs_tree(0);
        let mut order: Vec<u32> = parents.keys().copied().collect();
        order.sort_by_key(|v| {
            let mut depth = 0u32;
            let mut cur = *v;
            while let Some(&p) = parents.get(&cur) {
                depth += 1;
                cur = p;
                if p == 0 {
                    break;
                }
            }
            (depth, *v)
        });
        let has_g = |iso: &IsolatedSet, a: u32, b: u32| {
            iso.contains(&PauliElement::canonical(Kind::G, a, b).unwrap().0)
        };
        for v in order {
            if v == 0 || has_g(&self.isolated, 0, v) {
                continue;
            }
            let w = parents[&v];
            let left = self.unit(PauliElement::canonical(Kind::G, 0, w).unwrap().0);
            let right = self.unit(PauliElement::canonical(Kind::G, w, v).unwrap().0);
            let folded = left.commutator(&right)?;
            let (elem, _) = Self::expect_single(&folded, "path fold")?;
            if elem.kind != Kind::G || elem.endpoints() != (0, v) {
                return Err(ProofError::UnexpectedOperator {
                    context: "path fold".into(),
                    expected: format!("G[0,{v}]"),
                    got: elem.to_string(),
                });
            }
            self.isolated.insert(elem, StepTag::Step6)?;
        }

        // G on every remaining pair via the shared root vertex.
        for u in 1..n {
            for v in (u + 1)..n {
                if has_g(&self.isolated, u, v) {
                    continue;
                }
                let a = self.unit(PauliElement::canonical(Kind::G, 0, u).unwrap().0);
                let b = self.unit(PauliElement::canonical(Kind::G, 0, v).unwrap().0);
                let c = a.commutator(&b)?;
                let (elem, _) = Self::expect_single(&c, "root pair closure")?;
                if elem.kind != Kind::G || elem.endpoints() != (u, v) {
                    return Err(ProofError::UnexpectedOperator {
                        context: "root pair closure".into(),
                        expected: format!("G[{u},{v}]"),
                        got: elem.to_string(),
                    });
                }
                self.isolated.insert(elem, StepTag::Step6)?;
            }
        }

        // F on every pair: cross-block pairs rotate through the drift;
        // same-block pairs go through a pivot vertex in another block.
        let block_of = |flat: u32| StateIndex::from_flat(self.j, flat).unwrap().block;
        let mut same_block_pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let f = PauliElement::canonical(Kind::F, u, v).unwrap().0;
                if self.isolated.contains(&f) {
                    continue;
                }
                if block_of(u) != block_of(v) {
                    let g = PauliElement::canonical(Kind::G, u, v).unwrap().0;
                    let f = self.f_partner(g)?;
                    self.isolated.insert(f, StepTag::Step6)?;
                } else {
                    same_block_pairs.push((u, v));
                }
            }
        }
        for (u, v) in same_block_pairs {
            let pivot = if block_of(u) == Block::Tau { 2 * self.j + 1 } else { 0 };
            let g_up = self.unit(PauliElement::canonical(Kind::G, u, pivot).unwrap().0);
            let f_pv = self.unit(PauliElement::canonical(Kind::F, pivot, v).unwrap().0);
            let c = g_up.commutator(&f_pv)?;
            let (elem, _) = Self::expect_single(&c, "same-block F")?;
            if elem.kind != Kind::F || elem.endpoints() != (u, v) {
                return Err(ProofError::UnexpectedOperator {
                    context: "same-block F".into(),
                    expected: format!("F[{u},{v}]"),
                    got: elem.to_string(),
                });
            }
            self.isolated.insert(elem, StepTag::Step6)?;
        }

        // Spanning chain of diagonal elements: D_{k,k+1} = ½[G_{k,k+1}, F_{k,k+1}].
        for k in 0..(n - 1) {
            let g = self.unit(PauliElement::canonical(Kind::G, k, k + 1).unwrap().0);
            let f = self.unit(PauliElement::canonical(Kind::F, k, k + 1).unwrap().0);
            let c = g.commutator(&f)?;
            let (elem, coeff) = Self::expect_single(&c, "diagonal chain")?;
            if elem.kind != Kind::D
                || elem.endpoints() != (k, k + 1)
                || coeff != RadicalNumber::from_integer(2)
            {
                return Err(ProofError::UnexpectedOperator {
                    context: "diagonal chain".into(),
                    expected: format!("2·D[{k},{}]", k + 1),
                    got: format!("{c}"),
                });
            }
            self.isolated.insert(elem, StepTag::Step6)?;
        }

        let expected = (n as usize) * (n as usize) - 1;
        if self.isolated.len() != expected {
            return Err(ProofError::CountMismatch {
                expected,
                got: self.isolated.len(),
            });
        }
        Ok(())
    }
}

/// Runs the six steps in order and reports per-step element counts.
///
/// The first failing step halts the pipeline; its diagnosis lands in
/// `failures` and `pass` is false. Graph snapshots are taken after every
/// completed step.
pub fn verify_proof(j: u32, drift: &DriftSpec) -> ProofOutcome {
    let mut exec = Executor::new(j, drift);
    let n = subsystem_dim(j);
    let target = (n as usize) * (n as usize) - 1;
    let mut steps = Vec::new();
    let mut failures = Vec::new();
    let mut graphs = Vec::new();

    for tag in StepTag::ALL {
        let before = exec.isolated.len();
        let result = match tag {
            StepTag::Step1 => exec.step1(),
            StepTag::Step2 => exec.step2(),
            StepTag::Step3 => exec.step3(),
            StepTag::Step4 => exec.step4(),
            StepTag::Step5 => exec.step5(),
            StepTag::Step6 => exec.step6(),
        };
        match result {
            Ok(()) => {
                steps.push(StepReport {
                    tag,
                    new_elements: exec.isolated.len() - before,
                    cumulative: exec.isolated.len(),
                });
                graphs.push((
                    tag,
                    TransitionGraph::from_isolated(j, &exec.isolated, tag),
                ));
            }
            Err(e) => {
                failures.push(format!("{}: {e}", tag.label()));
                steps.push(StepReport {
                    tag,
                    new_elements: exec.isolated.len() - before,
                    cumulative: exec.isolated.len(),
                });
                graphs.push((
                    tag,
                    TransitionGraph::from_isolated(j, &exec.isolated, tag),
                ));
                break;
            }
        }
    }

    let pass = failures.is_empty() && exec.isolated.len() == target;
    ProofOutcome {
        report: ProofReport {
            schema: 1,
            j,
            n,
            target_dim: target,
            steps,
            pass,
            failures,
        },
        isolated: exec.isolated,
        graphs,
    }
}
