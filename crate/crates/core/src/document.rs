//! JSON documents for arrangements, verification reports and perturbations.
//!
//! Every number is a rational string (`"p"` or `"p/q"`), so documents are
//! exact. Reports carry the SHA-256 of the input arrangement's canonical
//! compact encoding.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::combinatorics::{ColorfulPartition, ColorfulTuple};
use crate::constructions::PerturbationReport;
use crate::error::{Error, Result};
use crate::geometry::{ColoredArrangement, Hyperplane, Vector};
use crate::scalar::{self, Scalar};
use crate::separation::{IntersectionWitness, SeparationCertificate, Side};
use crate::verifier::{
    BlockEvidence, MonochromaticOutcome, MonochromaticWitness, PartitionOutcome, PartitionRecord,
    RefutationReport, Verdict,
};

pub const FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn parse_vector(texts: &[String]) -> Result<Vector> {
    scalar::parse_all(texts).map(Vector::new)
}

fn format_vector(v: &Vector) -> Vec<String> {
    scalar::format_all(v.coords())
}

fn parse_matrix(rows: &[Vec<String>]) -> Result<Vec<Vec<Scalar>>> {
    rows.iter().map(|r| scalar::parse_all(r)).collect()
}

fn format_matrix(rows: &[Vec<Scalar>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| scalar::format_all(r)).collect()
}

fn check_version(found: u32) -> Result<()> {
    if found == FORMAT_VERSION {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "unsupported format_version {found}, expected {FORMAT_VERSION}"
        )))
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("documents always serialize");
    out.push('\n');
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneDocument {
    pub normal: Vec<String>,
    pub offset: String,
}

impl HyperplaneDocument {
    pub fn from_hyperplane(h: &Hyperplane) -> Self {
        HyperplaneDocument {
            normal: format_vector(h.normal()),
            offset: scalar::format(h.offset()),
        }
    }

    pub fn to_hyperplane(&self) -> Result<Hyperplane> {
        Hyperplane::new(parse_vector(&self.normal)?, scalar::parse(&self.offset)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementDocument {
    pub format_version: u32,
    pub dimension: usize,
    pub parts: usize,
    pub classes: Vec<Vec<HyperplaneDocument>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl ArrangementDocument {
    pub fn from_arrangement(arrangement: &ColoredArrangement) -> Self {
        ArrangementDocument {
            format_version: FORMAT_VERSION,
            dimension: arrangement.dimension(),
            parts: arrangement.parts(),
            classes: arrangement
                .classes()
                .iter()
                .map(|c| c.iter().map(HyperplaneDocument::from_hyperplane).collect())
                .collect(),
            labels: arrangement.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_arrangement(&self) -> Result<ColoredArrangement> {
        check_version(self.format_version)?;
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(HyperplaneDocument::to_hyperplane).collect())
            .collect::<Result<Vec<Vec<Hyperplane>>>>()?;
        let arrangement = ColoredArrangement::new(self.dimension, classes, self.labels.clone())?;
        if arrangement.parts() != self.parts {
            return Err(Error::InvalidArrangement(format!(
                "document says {} parts but classes have {}",
                self.parts,
                arrangement.parts()
            )));
        }
        Ok(arrangement)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Parses and validates an arrangement document.
pub fn parse_arrangement(text: &str) -> Result<ColoredArrangement> {
    ArrangementDocument::from_json(text)?.to_arrangement()
}

pub fn arrangement_to_json(arrangement: &ColoredArrangement) -> String {
    ArrangementDocument::from_arrangement(arrangement).to_json()
}

/// Hex SHA-256 of the compact encoding of the arrangement's document. Equal
/// arrangements hash equally whatever the input spelling (`"2/4"` vs `"1/2"`,
/// whitespace).
pub fn input_hash(arrangement: &ColoredArrangement) -> String {
    let doc = ArrangementDocument::from_arrangement(arrangement);
    let compact = serde_json::to_string(&doc).expect("documents always serialize");
    hex::encode(Sha256::digest(compact.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub normal: Vec<String>,
    pub offset: String,
    pub margin_sq: String,
    /// `"negative"` or `"positive"`: the side of the first simplex.
    pub first_side: String,
}

impl CertificateDocument {
    fn from_certificate(c: &SeparationCertificate) -> Self {
        CertificateDocument {
            normal: format_vector(c.separator.normal()),
            offset: scalar::format(c.separator.offset()),
            margin_sq: scalar::format(&c.margin_sq),
            first_side: match c.first_side {
                Side::Negative => "negative",
                Side::Positive => "positive",
            }
            .into(),
        }
    }

    fn to_certificate(&self) -> Result<SeparationCertificate> {
        Ok(SeparationCertificate {
            separator: Hyperplane::new(parse_vector(&self.normal)?, scalar::parse(&self.offset)?)?,
            margin_sq: scalar::parse(&self.margin_sq)?,
            first_side: match self.first_side.as_str() {
                "negative" => Side::Negative,
                "positive" => Side::Positive,
                other => return Err(Error::Parse(format!("unknown side {other:?}"))),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    /// Indices of the simplices the point is common to.
    pub simplices: Vec<usize>,
    pub point: Vec<String>,
    pub coefficients: Vec<Vec<String>>,
}

impl WitnessDocument {
    fn new(simplices: Vec<usize>, w: &IntersectionWitness) -> Self {
        WitnessDocument {
            simplices,
            point: format_vector(&w.point),
            coefficients: format_matrix(&w.coefficients),
        }
    }

    fn to_witness(&self) -> Result<IntersectionWitness> {
        Ok(IntersectionWitness {
            point: parse_vector(&self.point)?,
            coefficients: parse_matrix(&self.coefficients)?,
        })
    }

    fn pair(&self) -> Result<(usize, usize)> {
        match self.simplices[..] {
            [j, k] => Ok((j, k)),
            _ => Err(Error::Parse("pairwise witness needs two simplices".into())),
        }
    }
}

/// One colorful partition type. `parts[j][i]` is the hyperplane of class `i`
/// in part `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDocument {
    pub parts: Vec<Vec<usize>>,
    pub multiplicity: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disjoint_pair: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull_dist_sq: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessDocument>,
}

impl PartitionDocument {
    fn from_record(record: &PartitionRecord) -> Self {
        let mut doc = PartitionDocument {
            parts: record.partition.to_indices(),
            multiplicity: record.multiplicity,
            disjoint_pair: None,
            certificate: None,
            hull_dist_sq: None,
            witnesses: Vec::new(),
        };
        match &record.outcome {
            PartitionOutcome::Refuted {
                pair,
                certificate,
                hull_dist_sq,
            } => {
                doc.disjoint_pair = Some([pair.0, pair.1]);
                doc.certificate = Some(CertificateDocument::from_certificate(certificate));
                doc.hull_dist_sq = hull_dist_sq.as_ref().map(scalar::format);
            }
            PartitionOutcome::AllIntersect { witnesses } => {
                doc.witnesses = witnesses
                    .iter()
                    .map(|((j, k), w)| WitnessDocument::new(vec![*j, *k], w))
                    .collect();
            }
        }
        doc
    }

    fn to_record(&self) -> Result<PartitionRecord> {
        let partition = ColorfulPartition::new(
            self.parts
                .iter()
                .map(|p| ColorfulTuple { picks: p.clone() })
                .collect(),
        );
        if partition.to_indices() != self.parts {
            return Err(Error::Parse("partition parts must be sorted".into()));
        }
        let outcome = match (&self.disjoint_pair, &self.certificate) {
            (Some([j, k]), Some(c)) => PartitionOutcome::Refuted {
                pair: (*j, *k),
                certificate: c.to_certificate()?,
                hull_dist_sq: self
                    .hull_dist_sq
                    .as_deref()
                    .map(scalar::parse)
                    .transpose()?,
            },
            (None, None) => PartitionOutcome::AllIntersect {
                witnesses: self
                    .witnesses
                    .iter()
                    .map(|w| Ok((w.pair()?, w.to_witness()?)))
                    .collect::<Result<_>>()?,
            },
            _ => {
                return Err(Error::Parse(
                    "disjoint_pair and certificate must appear together".into(),
                ))
            }
        };
        Ok(PartitionRecord {
            partition,
            multiplicity: self.multiplicity,
            outcome,
        })
    }
}

/// Evidence for a monochromatic partition: `blocks` are hyperplane indices
/// into the class-by-class union of the arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonochromaticDocument {
    pub blocks: Vec<Vec<usize>>,
    /// `"common-point"` or `"pairwise"`.
    pub intersection: String,
    pub witnesses: Vec<WitnessDocument>,
}

impl MonochromaticDocument {
    fn from_witness(w: &MonochromaticWitness) -> Self {
        let (intersection, witnesses) = match &w.evidence {
            BlockEvidence::Common(c) => (
                "common-point",
                vec![WitnessDocument::new((0..w.blocks.len()).collect(), c)],
            ),
            BlockEvidence::Pairwise(ws) => (
                "pairwise",
                ws.iter()
                    .map(|((j, k), c)| WitnessDocument::new(vec![*j, *k], c))
                    .collect(),
            ),
        };
        MonochromaticDocument {
            blocks: w.blocks.clone(),
            intersection: intersection.into(),
            witnesses,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictLabel {
    Refuted,
    NotRefuted,
    WitnessFound,
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Colorful,
    Monochromatic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub format_version: u32,
    pub tool_version: String,
    pub input_hash: String,
    pub mode: Mode,
    pub verdict: VerdictLabel,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<PartitionDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_margin_sq: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_hull_dist_sq: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<MonochromaticDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions_checked: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl ReportDocument {
    fn empty(arrangement: &ColoredArrangement, mode: Mode, verdict: VerdictLabel) -> Self {
        ReportDocument {
            format_version: FORMAT_VERSION,
            tool_version: TOOL_VERSION.into(),
            input_hash: input_hash(arrangement),
            mode,
            verdict,
            partitions: Vec::new(),
            min_margin_sq: None,
            min_hull_dist_sq: None,
            witness: None,
            partitions_checked: None,
            message: None,
        }
    }

    pub fn colorful(arrangement: &ColoredArrangement, report: &RefutationReport) -> Self {
        let verdict = match report.verdict {
            Verdict::Refuted => VerdictLabel::Refuted,
            Verdict::NotRefuted => VerdictLabel::NotRefuted,
        };
        let mut doc = Self::empty(arrangement, Mode::Colorful, verdict);
        doc.partitions = report
            .records
            .iter()
            .map(PartitionDocument::from_record)
            .collect();
        doc.min_margin_sq = report.min_margin_sq.as_ref().map(scalar::format);
        doc.min_hull_dist_sq = report.min_hull_dist_sq.as_ref().map(scalar::format);
        doc
    }

    pub fn monochromatic(arrangement: &ColoredArrangement, outcome: &MonochromaticOutcome) -> Self {
        match outcome {
            MonochromaticOutcome::Witness(w) => {
                let mut doc =
                    Self::empty(arrangement, Mode::Monochromatic, VerdictLabel::WitnessFound);
                doc.witness = Some(MonochromaticDocument::from_witness(w));
                doc
            }
            MonochromaticOutcome::Exhausted { checked } => {
                let mut doc =
                    Self::empty(arrangement, Mode::Monochromatic, VerdictLabel::Exhausted);
                doc.partitions_checked = Some(*checked);
                doc.message = Some(MonochromaticOutcome::EXHAUSTED_MESSAGE.into());
                doc
            }
        }
    }

    /// Rebuilds the colorful report (for replay).
    pub fn to_refutation_report(&self) -> Result<RefutationReport> {
        check_version(self.format_version)?;
        if self.mode != Mode::Colorful {
            return Err(Error::Parse("not a colorful report".into()));
        }
        let verdict = match self.verdict {
            VerdictLabel::Refuted => Verdict::Refuted,
            VerdictLabel::NotRefuted => Verdict::NotRefuted,
            other => {
                return Err(Error::Parse(format!(
                    "verdict {other:?} in a colorful report"
                )))
            }
        };
        let opt = |v: &Option<String>| v.as_deref().map(scalar::parse).transpose();
        Ok(RefutationReport {
            records: self
                .partitions
                .iter()
                .map(PartitionDocument::to_record)
                .collect::<Result<_>>()?,
            verdict,
            min_margin_sq: opt(&self.min_margin_sq)?,
            min_hull_dist_sq: opt(&self.min_hull_dist_sq)?,
        })
    }

    /// Checks the hash and replays every certificate or witness against
    /// `arrangement`.
    pub fn replay(&self, arrangement: &ColoredArrangement) -> Result<bool> {
        if self.input_hash != input_hash(arrangement) {
            return Ok(false);
        }
        match self.mode {
            Mode::Colorful => {
                let report = self.to_refutation_report()?;
                let consistent = (report.verdict == Verdict::Refuted)
                    == report
                        .records
                        .iter()
                        .all(|r| matches!(r.outcome, PartitionOutcome::Refuted { .. }));
                Ok(consistent && report.replay(arrangement)?)
            }
            Mode::Monochromatic => match &self.witness {
                None => Ok(self.verdict == VerdictLabel::Exhausted),
                Some(doc) => {
                    let hyperplanes = arrangement.union();
                    let evidence = match doc.intersection.as_str() {
                        "common-point" => match &doc.witnesses[..] {
                            [w] => BlockEvidence::Common(w.to_witness()?),
                            _ => return Ok(false),
                        },
                        "pairwise" => BlockEvidence::Pairwise(
                            doc.witnesses
                                .iter()
                                .map(|w| Ok((w.pair()?, w.to_witness()?)))
                                .collect::<Result<_>>()?,
                        ),
                        other => {
                            return Err(Error::Parse(format!("unknown intersection {other:?}")))
                        }
                    };
                    let simplices = doc
                        .blocks
                        .iter()
                        .map(|b| {
                            if b.iter().any(|&i| i >= hyperplanes.len()) {
                                return Err(Error::Parse("block index out of range".into()));
                            }
                            let tuple: Vec<Hyperplane> =
                                b.iter().map(|&i| hyperplanes[i].clone()).collect();
                            crate::simplex::induced_simplex(&tuple)
                        })
                        .collect::<Result<_>>()?;
                    let witness = MonochromaticWitness {
                        blocks: doc.blocks.clone(),
                        simplices,
                        evidence,
                    };
                    Ok(self.verdict == VerdictLabel::WitnessFound
                        && witness.replay(&hyperplanes)?)
                }
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationDocument {
    pub format_version: u32,
    pub tool_version: String,
    pub input_hash: String,
    pub output_hash: String,
    pub seed: u64,
    pub attempts: usize,
    /// Largest per-coordinate offset used.
    pub magnitude: String,
    pub delta_sq: String,
    pub max_vertex_move_sq: String,
    pub reverification: ReportDocument,
}

impl PerturbationDocument {
    pub fn new(
        input: &ColoredArrangement,
        report: &PerturbationReport,
        reverification: &RefutationReport,
    ) -> Self {
        PerturbationDocument {
            format_version: FORMAT_VERSION,
            tool_version: TOOL_VERSION.into(),
            input_hash: input_hash(input),
            output_hash: input_hash(&report.perturbed),
            seed: report.seed,
            attempts: report.attempts,
            magnitude: scalar::format(&report.magnitude),
            delta_sq: scalar::format(&report.delta_sq),
            max_vertex_move_sq: scalar::format(&report.max_vertex_move_sq),
            reverification: ReportDocument::colorful(&report.perturbed, reverification),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::planar_counterexample;
    use crate::verifier::{verify_colorful_refutation, ColorfulOptions};

    #[test]
    fn arrangement_round_trip() {
        let arr = planar_counterexample(3).unwrap();
        let text = arrangement_to_json(&arr);
        assert_eq!(parse_arrangement(&text).unwrap(), arr);
    }

    #[test]
    fn malformed_rational_is_a_parse_error() {
        let arr = planar_counterexample(2).unwrap();
        let mut doc = ArrangementDocument::from_arrangement(&arr);
        doc.classes[0][0].offset = "3/0".into();
        let err = parse_arrangement(&doc.to_json()).unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "{err}");
    }

    #[test]
    fn hash_ignores_spelling() {
        let arr = planar_counterexample(2).unwrap();
        let mut doc = ArrangementDocument::from_arrangement(&arr);
        doc.classes[0][0].offset = "2/2".into();
        let respelled = doc.to_arrangement().unwrap();
        assert_eq!(input_hash(&respelled), input_hash(&arr));
        assert_eq!(input_hash(&arr).len(), 64);
    }

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        let arr = planar_counterexample(2).unwrap();
        let text = arrangement_to_json(&arr).replacen('{', "{\"extra\": 1,", 1);
        assert!(parse_arrangement(&text).is_err());
        let mut doc = ArrangementDocument::from_arrangement(&arr);
        doc.format_version = 9;
        assert!(doc.to_arrangement().is_err());
        doc.format_version = FORMAT_VERSION;
        doc.parts = 3;
        assert!(doc.to_arrangement().is_err());
    }

    #[test]
    fn colorful_report_round_trip_and_replay() {
        let arr = planar_counterexample(2).unwrap();
        let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
        let doc = ReportDocument::colorful(&arr, &report);
        assert_eq!(doc.verdict, VerdictLabel::Refuted);
        assert_eq!(doc.partitions.len(), 4);
        let back = ReportDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_refutation_report().unwrap(), report);
        assert!(back.replay(&arr).unwrap());
        // a different arrangement does not match the hash
        assert!(!back.replay(&planar_counterexample(3).unwrap()).unwrap());
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let arr = planar_counterexample(2).unwrap();
        let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
        let mut doc = ReportDocument::colorful(&arr, &report);
        let c = doc.partitions[0].certificate.as_mut().unwrap();
        c.offset = "100".into();
        assert!(!doc.replay(&arr).unwrap());
    }
}
