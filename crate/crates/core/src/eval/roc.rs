use serde::Serialize;

use super::{compare_ids, EvalError};
use crate::dataset::Dataset;
use crate::ged::DistanceMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub reference_id: String,
    pub class: String,
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`, one step per ranked graph.
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// Curve of the top-k classifier swept over a ranking, `true` marking a
/// same-class graph. Steps are axis-aligned, so the trapezoidal area is
/// computed exactly from counts.
pub fn roc_from_ranking(relevant: &[bool]) -> Result<(Vec<(f64, f64)>, f64), EvalError> {
    let pos = relevant.iter().filter(|&&r| r).count();
    let neg = relevant.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(EvalError::InvalidArgument(format!("ranking needs positives and negatives, got {pos} and {neg}")));
    }
    let mut points = Vec::with_capacity(relevant.len() + 1);
    points.push((0.0, 0.0));
    let (mut tp, mut fp, mut area) = (0usize, 0usize, 0usize);
    for &r in relevant {
        if r {
            tp += 1;
        } else {
            fp += 1;
            area += tp;
        }
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    Ok((points, area as f64 / (pos * neg) as f64))
}

/// Lowest-id graph of every class that has members.
pub fn default_references(d: &Dataset) -> Vec<String> {
    (0..d.class_names.len())
        .filter_map(|label| {
            d.graphs.iter().filter(|g| g.label == label).min_by(|a, b| compare_ids(&a.id, &b.id)).map(|g| g.id.clone())
        })
        .collect()
}

/// One curve per reference. `dm` rows must contain the references and its
/// columns must be the dataset in order; the reference itself is not ranked.
pub fn rank_and_roc(d: &Dataset, references: &[String], dm: &DistanceMatrix) -> Result<Vec<RocCurve>, EvalError> {
    if dm.cols() != d.len() || dm.col_ids.iter().zip(&d.graphs).any(|(c, g)| *c != g.id) {
        return Err(EvalError::InvalidArgument("distance columns must follow dataset order".into()));
    }
    references
        .iter()
        .map(|r| {
            let gi = d.index_of(r).ok_or_else(|| EvalError::UnknownReference(r.clone()))?;
            let row = dm.row_ids.iter().position(|x| x == r).ok_or_else(|| EvalError::UnknownReference(r.clone()))?;
            let label = d.graphs[gi].label;
            let mut ranked: Vec<usize> = (0..d.len()).filter(|&j| j != gi).collect();
            ranked.sort_by(|&a, &b| {
                dm.get(row, a).total_cmp(&dm.get(row, b)).then_with(|| compare_ids(&d.graphs[a].id, &d.graphs[b].id))
            });
            let relevant: Vec<bool> = ranked.iter().map(|&j| d.graphs[j].label == label).collect();
            let (points, auc) = roc_from_ranking(&relevant)?;
            Ok(RocCurve { reference_id: r.clone(), class: d.class_name(label).to_string(), points, auc })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_and_worst() {
        let (p, auc) = roc_from_ranking(&[true, true, false, false, false]).unwrap();
        assert_eq!(auc, 1.0);
        assert_eq!(p.first(), Some(&(0.0, 0.0)));
        assert_eq!(p.last(), Some(&(1.0, 1.0)));
        assert_eq!(roc_from_ranking(&[false, false, false, true]).unwrap().1, 0.0);
    }

    #[test]
    fn trapezoid_matches_pair_count() {
        // oracle: fraction of (positive, negative) pairs ranked correctly
        let r = [true, false, true, true, false, false, true, false];
        let mut good = 0;
        let mut total = 0;
        for i in 0..r.len() {
            for j in 0..r.len() {
                if r[i] && !r[j] {
                    total += 1;
                    good += (i < j) as usize;
                }
            }
        }
        let (p, auc) = roc_from_ranking(&r).unwrap();
        assert_eq!(auc, good as f64 / total as f64);
        let trap: f64 = p.windows(2).map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0).sum();
        assert!((trap - auc).abs() < 1e-12);
        assert!(p.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1));
    }

    #[test]
    fn degenerate() {
        assert!(roc_from_ranking(&[true, true]).is_err());
        assert!(roc_from_ranking(&[false]).is_err());
    }
}
