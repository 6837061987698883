//! Confusion-matrix bookkeeping shared by the posture and sequence
//! recognizers.

use std::collections::BTreeSet;

/// Square count matrix over (actual, predicted) class pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    classes: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    /// Builds the matrix from (actual, predicted) pairs. The class list is
    /// the sorted union of everything seen on either side.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let pairs: Vec<(String, String)> = pairs.into_iter().collect();
        let mut set = BTreeSet::new();
        for (a, p) in &pairs {
            set.insert(a.clone());
            set.insert(p.clone());
        }
        let classes: Vec<String> = set.into_iter().collect();
        let mut m = Self::with_classes(classes);
        for (a, p) in pairs {
            m.record(&a, &p);
        }
        m
    }

    pub fn with_classes(classes: Vec<String>) -> Self {
        let n = classes.len();
        Self {
            classes,
            counts: vec![vec![0; n]; n],
        }
    }

    /// Builds the matrix from stored counts, row-major by `classes` order.
    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Option<Self> {
        if counts.len() != classes.len() || counts.iter().any(|r| r.len() != classes.len()) {
            return None;
        }
        Some(Self { classes, counts })
    }

    pub fn record(&mut self, actual: &str, predicted: &str) {
        let a = self.index_of(actual).expect("unknown actual class");
        let p = self.index_of(predicted).expect("unknown predicted class");
        self.counts[a][p] += 1;
    }

    fn index_of(&self, class: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == class)
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn count(&self, actual: &str, predicted: &str) -> u64 {
        match (self.index_of(actual), self.index_of(predicted)) {
            (Some(a), Some(p)) => self.counts[a][p],
            _ => 0,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_total(&self, class: &str) -> u64 {
        self.index_of(class)
            .map(|a| self.counts[a].iter().sum())
            .unwrap_or(0)
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    /// trace / total; an empty matrix scores 1.0 vacuously.
    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            1.0
        } else {
            self.trace() as f64 / total as f64
        }
    }

    /// Diagonal fraction of one row, as a percentage.
    pub fn self_percent(&self, class: &str) -> f64 {
        let total = self.row_total(class);
        if total == 0 {
            return 0.0;
        }
        100.0 * self.count(class, class) as f64 / total as f64
    }

    /// Off-diagonal cells of one row at or above `threshold` percent,
    /// largest first.
    pub fn error_cells(&self, class: &str, threshold: f64) -> Vec<(String, f64)> {
        let a = match self.index_of(class) {
            Some(a) => a,
            None => return Vec::new(),
        };
        let total = self.row_total(class);
        if total == 0 {
            return Vec::new();
        }
        let mut cells: Vec<(String, f64)> = self.counts[a]
            .iter()
            .enumerate()
            .filter(|&(p, &c)| p != a && c > 0)
            .map(|(p, &c)| (self.classes[p].clone(), 100.0 * c as f64 / total as f64))
            .filter(|&(_, pct)| pct >= threshold)
            .collect();
        cells.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        cells
    }

    /// Per-class summary table: Class | Self % | Error cells >= threshold |
    /// Total.
    pub fn render_table(&self, error_threshold: f64) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<10} {:>7}  {:<40} {:>8}\n",
            "Class", "Self %", "Errors", "Total"
        ));
        for class in &self.classes {
            let errors = self
                .error_cells(class, error_threshold)
                .into_iter()
                .map(|(c, pct)| format!("({pct:.1}, {c})"))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!(
                "{:<10} {:>7.1}  {:<40} {:>8}\n",
                class,
                self.self_percent(class),
                errors,
                self.row_total(class)
            ));
        }
        out.push_str(&format!("Overall accuracy: {:.4}\n", self.accuracy()));
        out
    }
}
