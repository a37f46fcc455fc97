//! Theorem checkers.
//!
//! * [`verify_colorful_refutation`] certifies that every colorful partition
//!   of an arrangement has two induced simplices that are strictly separated.
//! * [`verify_monochromatic`] searches the block partitions of an uncolored
//!   family for one whose induced simplices share a point.
//! * [`karasev_heuristic_search`] looks for the same kind of partition via a
//!   candidate point `p`: project `p` onto every hyperplane and look for a
//!   Tverberg partition of the projections plus `p` in which `{p}` is a part.

use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::combinatorics::{
    enumerate_colorful, search_set_partitions, ColorfulPartition, Combinations,
    MonochromaticPartitions, PartShape,
};
use crate::error::{Error, Result};
use crate::geometry::{self, ColoredArrangement, Hyperplane, Vector};
use crate::scalar::{self, Scalar};
use crate::separation::{
    common_point, hull_membership, hulls_intersect, HullRelation, IntersectionWitness,
    SeparationCertificate,
};
use crate::simplex::{dist_sq_hulls, induced_simplex, Simplex};

// one per partition type, so the size gap is not worth a box
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionOutcome {
    /// Parts `pair.0 < pair.1` have strictly separated simplices.
    Refuted {
        pair: (usize, usize),
        certificate: SeparationCertificate,
        /// Exact squared distance between the two simplices, when computed.
        hull_dist_sq: Option<Scalar>,
    },
    /// Every pair of parts meets; one witness per pair, lexicographic.
    AllIntersect {
        witnesses: Vec<((usize, usize), IntersectionWitness)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionRecord {
    pub partition: ColorfulPartition,
    pub multiplicity: u64,
    pub outcome: PartitionOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Refuted,
    NotRefuted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationReport {
    /// One per partition type, in enumeration order.
    pub records: Vec<PartitionRecord>,
    pub verdict: Verdict,
    /// Smallest certificate margin (squared); the perturbation budget.
    pub min_margin_sq: Option<Scalar>,
    /// Smallest squared distance between a certified pair of simplices.
    pub min_hull_dist_sq: Option<Scalar>,
}

impl RefutationReport {
    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    /// The first partition whose simplices pairwise intersect.
    pub fn first_unrefuted(&self) -> Option<&PartitionRecord> {
        self.records
            .iter()
            .find(|r| matches!(r.outcome, PartitionOutcome::AllIntersect { .. }))
    }

    /// Squared perturbation margin: the smallest distance from a certified
    /// simplex to its separator, over all partitions.
    pub fn delta_sq(&self) -> Option<&Scalar> {
        if self.is_refuted() {
            self.min_margin_sq.as_ref()
        } else {
            None
        }
    }

    /// Replays every certificate and witness against freshly built simplices.
    pub fn replay(&self, arrangement: &ColoredArrangement) -> Result<bool> {
        for record in &self.records {
            let simplices = partition_simplices(arrangement, &record.partition)?;
            let ok = match &record.outcome {
                PartitionOutcome::Refuted {
                    pair: (j, k),
                    certificate,
                    ..
                } => certificate.replay(simplices[*j].vertices(), simplices[*k].vertices()),
                PartitionOutcome::AllIntersect { witnesses } => {
                    witnesses.iter().all(|((j, k), w)| {
                        w.replay(&[simplices[*j].vertices(), simplices[*k].vertices()])
                    })
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ColorfulOptions {
    pub up_to_symmetry: bool,
    /// Also compute the exact distance between each certified pair.
    pub hull_distances: bool,
}

impl Default for ColorfulOptions {
    fn default() -> Self {
        ColorfulOptions {
            up_to_symmetry: true,
            hull_distances: true,
        }
    }
}

pub fn partition_simplices(
    arrangement: &ColoredArrangement,
    partition: &ColorfulPartition,
) -> Result<Vec<Simplex>> {
    partition
        .parts()
        .iter()
        .map(|t| induced_simplex(&arrangement.tuple(&t.picks)))
        .collect()
}

fn check_partition(
    arrangement: &ColoredArrangement,
    partition: &ColorfulPartition,
    options: ColorfulOptions,
) -> Result<PartitionOutcome> {
    let simplices = partition_simplices(arrangement, partition)?;
    let mut witnesses = Vec::new();
    for pair in Combinations::new(simplices.len(), 2) {
        let (j, k) = (pair[0], pair[1]);
        let (a, b) = (simplices[j].vertices(), simplices[k].vertices());
        match hulls_intersect(a, b)? {
            HullRelation::Disjoint(certificate) => {
                let hull_dist_sq = if options.hull_distances {
                    Some(dist_sq_hulls(a, b)?)
                } else {
                    None
                };
                return Ok(PartitionOutcome::Refuted {
                    pair: (j, k),
                    certificate,
                    hull_dist_sq,
                });
            }
            HullRelation::Intersecting(w) => witnesses.push(((j, k), w)),
        }
    }
    Ok(PartitionOutcome::AllIntersect { witnesses })
}

/// Checks every colorful partition (type) of the arrangement for a pair of
/// disjoint induced simplices. Partitions run in parallel; the report is
/// assembled in enumeration order.
pub fn verify_colorful_refutation(
    arrangement: &ColoredArrangement,
    options: ColorfulOptions,
) -> Result<RefutationReport> {
    if !geometry::weak_general_position(arrangement) {
        return Err(Error::Position(
            "arrangement is not in weak general position".into(),
        ));
    }
    let types = enumerate_colorful(arrangement, options.up_to_symmetry);
    let outcomes: Vec<Result<PartitionOutcome>> = types
        .par_iter()
        .map(|t| check_partition(arrangement, &t.representative, options))
        .collect();

    let mut records = Vec::with_capacity(types.len());
    for (t, outcome) in types.into_iter().zip(outcomes) {
        records.push(PartitionRecord {
            partition: t.representative,
            multiplicity: t.multiplicity,
            outcome: outcome?,
        });
    }
    let verdict = if records
        .iter()
        .all(|r| matches!(r.outcome, PartitionOutcome::Refuted { .. }))
    {
        Verdict::Refuted
    } else {
        Verdict::NotRefuted
    };
    let refuted = || {
        records.iter().filter_map(|r| match &r.outcome {
            PartitionOutcome::Refuted {
                certificate,
                hull_dist_sq,
                ..
            } => Some((certificate, hull_dist_sq)),
            PartitionOutcome::AllIntersect { .. } => None,
        })
    };
    let min_margin_sq = refuted().map(|(c, _)| c.margin_sq.clone()).min();
    let min_hull_dist_sq = refuted().filter_map(|(_, d)| d.clone()).min();
    Ok(RefutationReport {
        records,
        verdict,
        min_margin_sq,
        min_hull_dist_sq,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IntersectionMode {
    /// All simplices share one point.
    #[default]
    CommonPoint,
    /// Every two simplices meet.
    Pairwise,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockEvidence {
    /// Coefficients are per block, over that block's simplex vertices.
    Common(IntersectionWitness),
    Pairwise(Vec<((usize, usize), IntersectionWitness)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonochromaticWitness {
    /// Hyperplane indices, `r` blocks of `d + 1`.
    pub blocks: Vec<Vec<usize>>,
    pub simplices: Vec<Simplex>,
    pub evidence: BlockEvidence,
}

impl MonochromaticWitness {
    pub fn common_point(&self) -> Option<&Vector> {
        match &self.evidence {
            BlockEvidence::Common(w) => Some(&w.point),
            BlockEvidence::Pairwise(_) => None,
        }
    }

    /// Rebuilds the simplices from `hyperplanes` and replays the evidence.
    pub fn replay(&self, hyperplanes: &[Hyperplane]) -> Result<bool> {
        let simplices = block_simplices(hyperplanes, &self.blocks)?;
        if simplices != self.simplices {
            return Ok(false);
        }
        let hulls: Vec<&[Vector]> = simplices.iter().map(Simplex::vertices).collect();
        Ok(match &self.evidence {
            BlockEvidence::Common(w) => w.replay(&hulls),
            BlockEvidence::Pairwise(ws) => {
                ws.len() == hulls.len() * (hulls.len() - 1) / 2
                    && ws
                        .iter()
                        .all(|((j, k), w)| w.replay(&[hulls[*j], hulls[*k]]))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonochromaticOutcome {
    Witness(MonochromaticWitness),
    Exhausted { checked: usize },
}

impl MonochromaticOutcome {
    pub const EXHAUSTED_MESSAGE: &'static str = "no block partition has intersecting simplices; \
         for a prime-power number of blocks this contradicts the monochromatic partition \
         theorem and points to an implementation bug";
}

fn block_simplices(hyperplanes: &[Hyperplane], blocks: &[Vec<usize>]) -> Result<Vec<Simplex>> {
    blocks
        .iter()
        .map(|b| {
            let tuple: Vec<Hyperplane> = b.iter().map(|&i| hyperplanes[i].clone()).collect();
            induced_simplex(&tuple)
        })
        .collect()
}

fn check_monochromatic_input(hyperplanes: &[Hyperplane], r: usize) -> Result<usize> {
    let d = hyperplanes.first().map_or(0, Hyperplane::dim);
    if r == 0 || hyperplanes.len() != r * (d + 1) {
        return Err(Error::SizeMismatch {
            expected: r * (d + 1),
            found: hyperplanes.len(),
        });
    }
    if let Some(h) = hyperplanes.iter().find(|h| h.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: h.dim(),
        });
    }
    if !geometry::general_position(hyperplanes, d) {
        return Err(Error::Position(
            "hyperplanes are not in general position".into(),
        ));
    }
    Ok(d)
}

fn evidence_for(simplices: &[Simplex], mode: IntersectionMode) -> Result<Option<BlockEvidence>> {
    let hulls: Vec<&[Vector]> = simplices.iter().map(Simplex::vertices).collect();
    match mode {
        IntersectionMode::CommonPoint => Ok(common_point(&hulls)?.map(BlockEvidence::Common)),
        IntersectionMode::Pairwise => {
            let mut ws = Vec::new();
            for pair in Combinations::new(hulls.len(), 2) {
                match hulls_intersect(hulls[pair[0]], hulls[pair[1]])? {
                    HullRelation::Intersecting(w) => ws.push(((pair[0], pair[1]), w)),
                    HullRelation::Disjoint(_) => return Ok(None),
                }
            }
            Ok(Some(BlockEvidence::Pairwise(ws)))
        }
    }
}

/// Streams the block partitions of `r (d + 1)` hyperplanes in general
/// position and returns the first whose induced simplices intersect.
pub fn verify_monochromatic(
    hyperplanes: &[Hyperplane],
    r: usize,
    mode: IntersectionMode,
) -> Result<MonochromaticOutcome> {
    let d = check_monochromatic_input(hyperplanes, r)?;
    let mut checked = 0;
    for blocks in MonochromaticPartitions::new(r, d + 1) {
        checked += 1;
        let simplices = block_simplices(hyperplanes, &blocks)?;
        if let Some(evidence) = evidence_for(&simplices, mode)? {
            return Ok(MonochromaticOutcome::Witness(MonochromaticWitness {
                blocks,
                simplices,
                evidence,
            }));
        }
    }
    Ok(MonochromaticOutcome::Exhausted { checked })
}

/// The orthogonal projections of `p` onto each hyperplane, followed by `p`.
pub fn karasev_projection(p: &Vector, hyperplanes: &[Hyperplane]) -> Result<Vec<Vector>> {
    if let Some(h) = hyperplanes.iter().find(|h| h.dim() != p.dim()) {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: h.dim(),
        });
    }
    let mut out: Vec<Vector> = hyperplanes.iter().map(|h| h.project(p)).collect();
    out.push(p.clone());
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TverbergPartition {
    /// Point indices per part.
    pub blocks: Vec<Vec<usize>>,
    pub witness: IntersectionWitness,
}

fn tverberg_search(
    points: &[Vector],
    r: usize,
    shape: PartShape,
    mut accept: impl FnMut(&TverbergPartition) -> Result<bool>,
) -> Result<Option<TverbergPartition>> {
    if points.len() < r || r == 0 {
        return Ok(None);
    }
    let found = search_set_partitions(points.len(), r, shape, |blocks| {
        let hulls: Vec<Vec<Vector>> = blocks
            .iter()
            .map(|b| b.iter().map(|&i| points[i].clone()).collect())
            .collect();
        let refs: Vec<&[Vector]> = hulls.iter().map(Vec::as_slice).collect();
        match common_point(&refs) {
            Err(e) => ControlFlow::Break(Err(e)),
            Ok(None) => ControlFlow::Continue(()),
            Ok(Some(witness)) => {
                let candidate = TverbergPartition {
                    blocks: blocks.to_vec(),
                    witness,
                };
                match accept(&candidate) {
                    Err(e) => ControlFlow::Break(Err(e)),
                    Ok(true) => ControlFlow::Break(Ok(candidate)),
                    Ok(false) => ControlFlow::Continue(()),
                }
            }
        }
    });
    found.transpose()
}

/// First partition of `points` into `r` parts (restricted by `shape`) whose
/// convex hulls share a point.
pub fn tverberg_bruteforce(
    points: &[Vector],
    r: usize,
    shape: PartShape,
) -> Result<Option<TverbergPartition>> {
    tverberg_search(points, r, shape, |_| Ok(true))
}

/// Candidate points tried by [`karasev_heuristic_search`], in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidateSampling {
    /// Intersection points of `d`-subsets.
    pub vertices: bool,
    /// Centroids of vertex triples.
    pub centroids: bool,
    /// Points per axis of a rational grid over the vertices' bounding box;
    /// zero disables it.
    pub grid: usize,
}

impl Default for CandidateSampling {
    fn default() -> Self {
        CandidateSampling {
            vertices: true,
            centroids: true,
            grid: 9,
        }
    }
}

impl CandidateSampling {
    pub fn none() -> Self {
        CandidateSampling {
            vertices: false,
            centroids: false,
            grid: 0,
        }
    }
}

fn arrangement_vertices(hyperplanes: &[Hyperplane], d: usize) -> Result<Vec<Vector>> {
    let mut out: Vec<Vector> = Vec::new();
    for subset in Combinations::new(hyperplanes.len(), d) {
        let chosen: Vec<Hyperplane> = subset.iter().map(|&i| hyperplanes[i].clone()).collect();
        if let Some(v) = geometry::solve_linear(&chosen)? {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

fn candidate_points(
    hyperplanes: &[Hyperplane],
    d: usize,
    sampling: CandidateSampling,
) -> Result<Vec<Vector>> {
    let vertices = arrangement_vertices(hyperplanes, d)?;
    let mut out = Vec::new();
    if sampling.vertices {
        out.extend(vertices.iter().cloned());
    }
    if sampling.centroids {
        let third = scalar::ratio(1, 3);
        for t in Combinations::new(vertices.len(), 3) {
            let sum = &(&vertices[t[0]] + &vertices[t[1]]) + &vertices[t[2]];
            out.push(sum.scale(&third));
        }
    }
    if sampling.grid > 0 && !vertices.is_empty() {
        let lo: Vec<Scalar> = (0..d)
            .map(|k| vertices.iter().map(|v| v[k].clone()).min().unwrap())
            .collect();
        let hi: Vec<Scalar> = (0..d)
            .map(|k| vertices.iter().map(|v| v[k].clone()).max().unwrap())
            .collect();
        let steps = sampling.grid;
        let denom = scalar::int(steps.max(2) as i64 - 1);
        let mut idx = vec![0usize; d];
        'grid: loop {
            let coords = (0..d)
                .map(|k| &lo[k] + (&hi[k] - &lo[k]) * scalar::int(idx[k] as i64) / &denom)
                .collect();
            out.push(Vector::new(coords));
            for i in idx.iter_mut() {
                *i += 1;
                if *i < steps {
                    continue 'grid;
                }
                *i = 0;
            }
            break;
        }
    }
    Ok(out)
}

/// A validated witness found through the projection route, with the point
/// that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicWitness {
    pub candidate: Vector,
    pub witness: MonochromaticWitness,
}

/// For each candidate `p`, looks for a Tverberg partition of the projections
/// of `p` plus `p` itself into `r + 1` parts with `{p}` alone and every other
/// part of size `d + 1`, then checks `p` against each induced simplex.
pub fn karasev_heuristic_search(
    hyperplanes: &[Hyperplane],
    r: usize,
    sampling: CandidateSampling,
) -> Result<Option<HeuristicWitness>> {
    let d = check_monochromatic_input(hyperplanes, r)?;
    let n = hyperplanes.len();
    let shape = PartShape {
        singleton: Some(n),
        block_size: Some(d + 1),
    };
    for p in candidate_points(hyperplanes, d, sampling)? {
        let points = karasev_projection(&p, hyperplanes)?;
        let mut validated: Option<MonochromaticWitness> = None;
        tverberg_search(&points, r + 1, shape, |found| {
            let blocks: Vec<Vec<usize>> = found
                .blocks
                .iter()
                .filter(|b| b.as_slice() != [n])
                .cloned()
                .collect();
            let simplices = block_simplices(hyperplanes, &blocks)?;
            let mut coefficients = Vec::with_capacity(r);
            for s in &simplices {
                match hull_membership(&p, s.vertices())? {
                    Some(c) => coefficients.push(c),
                    None => return Ok(false),
                }
            }
            validated = Some(MonochromaticWitness {
                blocks,
                simplices,
                evidence: BlockEvidence::Common(IntersectionWitness {
                    point: p.clone(),
                    coefficients,
                }),
            });
            Ok(true)
        })?;
        if let Some(witness) = validated {
            return Ok(Some(HeuristicWitness {
                candidate: p,
                witness,
            }));
        }
    }
    Ok(None)
}
