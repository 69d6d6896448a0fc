use super::{compare_ids, EvalError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor<'a> {
    pub distance: f64,
    pub id: &'a str,
    pub label: usize,
}

/// Majority label among the `k` nearest candidates.
///
/// Candidates are ordered by distance, then by id. When several labels share
/// the top vote count, the label of the nearest candidate among them wins.
pub fn knn_classify(candidates: &[Neighbor], k: usize) -> Result<usize, EvalError> {
    if candidates.is_empty() {
        return Err(EvalError::EmptyTrainingSet);
    }
    if k == 0 {
        return Err(EvalError::InvalidArgument("k must be at least 1".into()));
    }
    let mut sorted: Vec<&Neighbor> = candidates.iter().collect();
    sorted.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| compare_ids(a.id, b.id)));
    let top = &sorted[..k.min(sorted.len())];
    let classes = top.iter().map(|n| n.label).max().unwrap_or(0) + 1;
    let mut votes = vec![0usize; classes];
    for n in top {
        votes[n.label] += 1;
    }
    let best = votes.iter().copied().max().unwrap_or(0);
    Ok(top.iter().find(|n| votes[n.label] == best).map(|n| n.label).unwrap_or(0))
}
