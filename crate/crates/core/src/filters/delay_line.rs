use std::collections::VecDeque;

/// Tapped delay line serving the lagged regressor
/// `x(n) = [s(n−P), s(n−P−1), …, s(n−P−L+1)]`, newest first.
///
/// Each stored sample carries its stream index so the emitted regressor can
/// be checked for look-ahead.
#[derive(Debug, Clone)]
pub struct DelayLine<S> {
    taps: usize,
    gap: usize,
    buf: VecDeque<(u64, S)>,
    ingested: u64,
}

impl<S: Copy> DelayLine<S> {
    /// `taps` is the filter length L, `gap` the prediction step P.
    pub fn new(taps: usize, gap: usize) -> Self {
        let capacity = taps + gap;
        DelayLine {
            taps,
            gap,
            buf: VecDeque::with_capacity(capacity),
            ingested: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.taps + self.gap
    }

    /// Number of samples pushed so far.
    pub fn ingested(&self) -> u64 {
        self.ingested
    }

    /// Index of the most recent sample, if any.
    pub fn newest_index(&self) -> Option<u64> {
        self.ingested.checked_sub(1)
    }

    pub fn push(&mut self, sample: S) {
        if self.buf.len() == self.capacity() {
            self.buf.pop_front();
        }
        self.buf.push_back((self.ingested, sample));
        self.ingested += 1;
    }

    /// True once L + P samples have been ingested.
    pub fn is_ready(&self) -> bool {
        self.buf.len() == self.capacity()
    }

    /// Writes the regressor into `out`. Returns false during warm-up.
    pub fn regressor_into(&self, out: &mut Vec<S>) -> bool {
        if !self.is_ready() {
            return false;
        }
        out.clear();
        out.extend(self.lagged().map(|&(_, s)| s));
        true
    }

    /// Stream indices of the samples the current regressor would contain.
    pub fn regressor_indices(&self) -> Vec<u64> {
        if !self.is_ready() {
            return Vec::new();
        }
        self.lagged().map(|&(i, _)| i).collect()
    }

    fn lagged(&self) -> impl Iterator<Item = &(u64, S)> {
        // back is s(n); skip P samples, then take L going back in time.
        self.buf.iter().rev().skip(self.gap).take(self.taps)
    }
}
