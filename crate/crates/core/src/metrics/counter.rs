/// Deterministic tally of the work a multiplication performs.
///
/// `temp_buffers` counts allocation events of auxiliary matrix buffers;
/// `peak_live_elements` is the high-water mark of auxiliary scalar elements
/// alive at once. Matrices the caller owns, and copies made by the padding
/// wrapper, are not auxiliary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    mults: u64,
    adds: u64,
    temp_buffers: u64,
    peak_live_elements: u64,
    live_elements: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mults(&self) -> u64 {
        self.mults
    }

    /// Scalar additions and subtractions.
    pub fn adds(&self) -> u64 {
        self.adds
    }

    pub fn temp_buffers(&self) -> u64 {
        self.temp_buffers
    }

    pub fn peak_live_elements(&self) -> u64 {
        self.peak_live_elements
    }

    /// Auxiliary elements currently allocated; zero once a kernel returns.
    pub fn live_elements(&self) -> u64 {
        self.live_elements
    }

    #[inline]
    pub fn record_mults(&mut self, n: u64) {
        self.mults += n;
    }

    #[inline]
    pub fn record_adds(&mut self, n: u64) {
        self.adds += n;
    }

    pub fn record_alloc(&mut self, elements: u64) {
        self.temp_buffers += 1;
        self.live_elements += elements;
        self.peak_live_elements = self.peak_live_elements.max(self.live_elements);
    }

    pub fn record_free(&mut self, elements: u64) {
        debug_assert!(elements <= self.live_elements);
        self.live_elements -= elements;
    }

    /// The four reported quantities, for cross-run comparisons.
    pub fn totals(&self) -> (u64, u64, u64, u64) {
        (self.mults, self.adds, self.temp_buffers, self.peak_live_elements)
    }
}
