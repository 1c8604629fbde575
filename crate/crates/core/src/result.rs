//! Spanner outputs and run statistics shared by every construction.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ColorMode, EdgeId};
use crate::sampler::SamplerStats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dcsn {
    Keep,
    Safe,
    Pstpn,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecisionRecord {
    pub level: usize,
    pub vertex: usize,
    pub edge: EdgeId,
    pub dcsn: Dcsn,
    /// Approximate log2 of gsc_I over the safe/keep/pstpn voters (exact values drive decisions).
    pub log2_scores: [f64; 3],
    pub converted: Option<&'static str>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VcftLastStats {
    pub charged: Vec<usize>,
    pub type1_keeps: Vec<usize>,
    pub type2_keeps: Vec<usize>,
    pub safe: Vec<usize>,
    /// Final Φ, Φ_X, Φ_Y per vertex (approximate, for reporting).
    pub phi: Vec<f64>,
    pub phi_x: Vec<f64>,
    pub phi_y: Vec<f64>,
    pub y_tilde: Vec<usize>,
    pub last_level_centers: usize,
    pub potential_checks: usize,
    pub observation_checks: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LevelStats {
    pub level: usize,
    /// |E_i|
    pub edges: usize,
    /// Endpoint decisions summed over vertices.
    pub keep: usize,
    pub safe: usize,
    pub pstpn: usize,
    /// (keep, safe, pstpn) per vertex.
    pub per_vertex: Vec<[usize; 3]>,
    pub kept_edges: usize,
    pub discarded_edges: usize,
    pub postponed_edges: usize,
    pub fallback_sampler: usize,
    pub fallback_no_witness: usize,
    pub fallback_last_level: usize,
    pub clamps: usize,
    pub reused_parks: usize,
    pub sampler: SamplerStats,
    pub max_attachment_paths: usize,
    pub safe_audits: usize,
    pub audit_skipped: usize,
    pub sampled_decisions: usize,
    pub sampled_exact_fallbacks: usize,
    pub sampled_disagreements: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vcft_last: Option<VcftLastStats>,
}

impl LevelStats {
    pub fn new(level: usize, n: usize) -> Self {
        LevelStats {
            level,
            per_vertex: vec![[0; 3]; n],
            ..Default::default()
        }
    }

    pub fn record(&mut self, v: usize, d: Dcsn) {
        let slot = match d {
            Dcsn::Keep => {
                self.keep += 1;
                0
            }
            Dcsn::Safe => {
                self.safe += 1;
                1
            }
            Dcsn::Pstpn => {
                self.pstpn += 1;
                2
            }
        };
        self.per_vertex[v][slot] += 1;
    }

    /// Fold per-vertex counters of a partial stats object into this one.
    pub fn absorb(&mut self, o: &LevelStats) {
        self.keep += o.keep;
        self.safe += o.safe;
        self.pstpn += o.pstpn;
        for (a, b) in self.per_vertex.iter_mut().zip(&o.per_vertex) {
            for s in 0..3 {
                a[s] += b[s];
            }
        }
        self.fallback_sampler += o.fallback_sampler;
        self.fallback_no_witness += o.fallback_no_witness;
        self.fallback_last_level += o.fallback_last_level;
        self.clamps += o.clamps;
        self.reused_parks += o.reused_parks;
        self.sampler += &o.sampler;
        self.max_attachment_paths = self.max_attachment_paths.max(o.max_attachment_paths);
        self.safe_audits += o.safe_audits;
        self.audit_skipped += o.audit_skipped;
        self.sampled_decisions += o.sampled_decisions;
        self.sampled_exact_fallbacks += o.sampled_exact_fallbacks;
        self.sampled_disagreements += o.sampled_disagreements;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpannerResult {
    pub algorithm: String,
    pub mode: ColorMode,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub f: usize,
    pub seed: u64,
    /// Kept edge ids, ascending.
    pub kept: Vec<EdgeId>,
    pub levels: Vec<LevelStats>,
    /// |S_i| for each level.
    pub center_counts: Vec<usize>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<DecisionRecord>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub extra: serde_json::Value,
}

impl SpannerResult {
    pub fn new(algorithm: &str, mode: ColorMode, n: usize, m: usize, k: usize, f: usize, seed: u64) -> Self {
        SpannerResult {
            algorithm: algorithm.to_string(),
            mode,
            n,
            m,
            k,
            f,
            seed,
            kept: Vec::new(),
            levels: Vec::new(),
            center_counts: Vec::new(),
            warnings: Vec::new(),
            trace: Vec::new(),
            extra: serde_json::Value::Null,
        }
    }

    pub fn size(&self) -> usize {
        self.kept.len()
    }

    pub fn stretch(&self) -> usize {
        2 * self.k - 1
    }

    pub fn report_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// "spanner <k> <f> <stretch>" followed by one kept edge id per line.
pub fn write_spanner_file(k: usize, f: usize, kept: &[EdgeId]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "spanner {} {} {}", k, f, 2 * k - 1);
    for id in kept {
        let _ = writeln!(s, "{id}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannerFile {
    pub k: usize,
    pub f: usize,
    pub stretch: usize,
    pub kept: Vec<EdgeId>,
}

pub fn parse_spanner_file(text: &str, m: usize) -> Result<SpannerFile> {
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty spanner file".into()))?;
    let t: Vec<&str> = header.split_whitespace().collect();
    if t.len() != 4 || t[0] != "spanner" {
        return Err(perr(hl, "expected 'spanner <k> <f> <stretch>'".into()));
    }
    let num = |s: &str| -> Result<usize> {
        s.parse().map_err(|_| perr(hl, format!("bad number '{s}'")))
    };
    let (k, f, stretch) = (num(t[1])?, num(t[2])?, num(t[3])?);
    if k == 0 || stretch != 2 * k - 1 {
        return Err(perr(hl, format!("stretch {stretch} does not match k={k}")));
    }
    let mut kept = Vec::new();
    for (ln, l) in lines {
        let id: EdgeId = l
            .parse()
            .map_err(|_| perr(ln, format!("bad edge id '{l}'")))?;
        if id >= m {
            return Err(perr(ln, format!("edge id {id} out of range")));
        }
        kept.push(id);
    }
    kept.sort_unstable();
    kept.dedup();
    Ok(SpannerFile {
        k,
        f,
        stretch,
        kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spanner_file_round_trip() {
        let text = write_spanner_file(2, 1, &[0, 3, 4]);
        assert_eq!(text, "spanner 2 1 3\n0\n3\n4\n");
        let sf = parse_spanner_file(&text, 5).unwrap();
        assert_eq!(sf.kept, vec![0, 3, 4]);
        assert!(parse_spanner_file(&text, 4).is_err());
        assert!(parse_spanner_file("spanner 2 1 5\n", 4).is_err());
    }
}
