//! Plot-ready CSV renderings of evaluation results.

use super::bench::BenchRecord;
use super::cv::CvReport;
use super::roc::RocCurve;

pub fn roc_csv(c: &RocCurve) -> String {
    let mut s = String::from("fpr,tpr\n");
    for (f, t) in &c.points {
        s.push_str(&format!("{f},{t}\n"));
    }
    s
}

pub fn auc_csv(curves: &[RocCurve]) -> String {
    let mut s = String::from("reference,class,auc\n");
    for c in curves {
        s.push_str(&format!("{},{},{}\n", c.reference_id, c.class, c.auc));
    }
    s
}

pub fn cv_csv(reports: &[CvReport]) -> String {
    let mut s = String::from("method,fold,accuracy,seed,test_size,correct\n");
    for r in reports {
        for f in &r.folds {
            let seed = f.seed.map(|x| x.to_string()).unwrap_or_default();
            s.push_str(&format!("{},{},{},{},{},{}\n", r.method, f.fold, f.accuracy, seed, f.test_size, f.correct));
        }
    }
    s
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from("method,fraction,mean_ms,stdev_ms,phase,train_size,test_size,runs\n");
    for r in records {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.method, r.fraction, r.mean_ms, r.stdev_ms, r.phase, r.train_size, r.test_size, r.runs
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::cv::FoldResult;

    #[test]
    fn cv_rows() {
        let r = CvReport {
            method: "APX2".into(),
            folds: vec![FoldResult { fold: 0, seed: None, test_size: 4, correct: 3, accuracy: 75.0 }],
            mean: 75.0,
            stdev: 0.0,
        };
        assert_eq!(cv_csv(&[r]), "method,fold,accuracy,seed,test_size,correct\nAPX2,0,75,,4,3\n");
    }
}
