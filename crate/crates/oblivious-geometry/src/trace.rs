//! Instrumented memory: arrays that report every cell access to a shared tracer.
//!
//! A [`Tracer`] is created per execution and handed to every [`TracedArray`]
//! that execution allocates. Array ids are assigned in allocation order, so two
//! runs that allocate the same arrays in the same order get the same ids.

use std::cell::{Cell, RefCell};
use std::fmt;
use std::io::{self, Write};
use std::rc::Rc;
use std::sync::Arc;

const KIND_BITS: u32 = 1;
const INDEX_BITS: u32 = 41;
const ID_SHIFT: u32 = KIND_BITS + INDEX_BITS;

/// Read or write.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Access {
    Read,
    Write,
}

impl Access {
    fn bit(self) -> u64 {
        match self {
            Access::Read => 0,
            Access::Write => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Access::Read => 'r',
            Access::Write => 'w',
        }
    }
}

/// One recorded memory access.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub array_id: u32,
    pub index: u64,
    pub kind: Access,
    pub step: u64,
}

impl TraceEvent {
    fn pack(array_id: u32, index: usize, kind: Access) -> u64 {
        debug_assert!((index as u64) < (1u64 << INDEX_BITS));
        ((array_id as u64) << ID_SHIFT) | ((index as u64) << KIND_BITS) | kind.bit()
    }

    fn unpack(word: u64, step: u64) -> Self {
        TraceEvent {
            array_id: (word >> ID_SHIFT) as u32,
            index: (word >> KIND_BITS) & ((1u64 << INDEX_BITS) - 1),
            kind: if word & 1 == 1 { Access::Write } else { Access::Read },
            step,
        }
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.array_id, self.index, self.kind.symbol())
    }
}

/// True iff both traces have the same length and agree on
/// `(array_id, index, kind)` at every position. Step numbers are ignored.
pub fn trace_equal(t1: &[TraceEvent], t2: &[TraceEvent]) -> bool {
    t1.len() == t2.len()
        && t1
            .iter()
            .zip(t2)
            .all(|(a, b)| a.array_id == b.array_id && a.index == b.index && a.kind == b.kind)
}

/// What a tracer does with events.
#[derive(Clone, Debug)]
pub enum TraceMode {
    /// Only count events.
    Count,
    /// Keep every event in memory.
    Record,
    /// Compare each event against a previously recorded trace as it happens.
    Verify(Arc<PackedTrace>),
}

/// A recorded trace in packed form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackedTrace {
    words: Vec<u64>,
}

impl PackedTrace {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn events(&self) -> Vec<TraceEvent> {
        self.words
            .iter()
            .enumerate()
            .map(|(i, &w)| TraceEvent::unpack(w, i as u64))
            .collect()
    }

    pub fn event(&self, step: usize) -> Option<TraceEvent> {
        self.words.get(step).map(|&w| TraceEvent::unpack(w, step as u64))
    }

    /// Writes the dump format: one `<array_id> <index> <r|w>` line per event.
    pub fn dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (i, &w) in self.words.iter().enumerate() {
            writeln!(out, "{}", TraceEvent::unpack(w, i as u64))?;
        }
        Ok(())
    }
}

enum Sink {
    Count,
    Record(Vec<u64>),
    Verify {
        reference: Arc<PackedTrace>,
        mismatch: Option<u64>,
    },
}

struct Inner {
    next_id: Cell<u32>,
    steps: Cell<u64>,
    capacities: RefCell<Vec<usize>>,
    sink: RefCell<Sink>,
}

/// Shared handle that collects the trace of one execution.
#[derive(Clone)]
pub struct Tracer {
    inner: Rc<Inner>,
}

/// What a finished execution produced.
#[derive(Clone, Debug)]
pub struct TraceSummary {
    pub len: u64,
    pub arrays: u32,
    pub trace: Option<PackedTrace>,
    pub verdict: Option<bool>,
    pub first_mismatch: Option<u64>,
}

impl Tracer {
    pub fn new(mode: TraceMode) -> Self {
        let sink = match mode {
            TraceMode::Count => Sink::Count,
            TraceMode::Record => Sink::Record(Vec::new()),
            TraceMode::Verify(reference) => Sink::Verify {
                reference,
                mismatch: None,
            },
        };
        Tracer {
            inner: Rc::new(Inner {
                next_id: Cell::new(0),
                steps: Cell::new(0),
                capacities: RefCell::new(Vec::new()),
                sink: RefCell::new(sink),
            }),
        }
    }

    pub fn counting() -> Self {
        Self::new(TraceMode::Count)
    }

    pub fn recording() -> Self {
        Self::new(TraceMode::Record)
    }

    pub fn verifying(reference: Arc<PackedTrace>) -> Self {
        Self::new(TraceMode::Verify(reference))
    }

    fn register(&self, capacity: usize) -> u32 {
        let id = self.inner.next_id.get();
        self.inner.next_id.set(id + 1);
        self.inner.capacities.borrow_mut().push(capacity);
        id
    }

    /// Declared capacity of an array created by this tracer.
    pub fn capacity_of(&self, id: u32) -> Option<usize> {
        self.inner.capacities.borrow().get(id as usize).copied()
    }

    #[inline]
    fn emit(&self, array_id: u32, index: usize, kind: Access) {
        let step = self.inner.steps.get();
        self.inner.steps.set(step + 1);
        match &mut *self.inner.sink.borrow_mut() {
            Sink::Count => {}
            Sink::Record(words) => words.push(TraceEvent::pack(array_id, index, kind)),
            Sink::Verify {
                reference,
                mismatch,
            } => {
                if mismatch.is_none() {
                    let word = TraceEvent::pack(array_id, index, kind);
                    if reference.words.get(step as usize) != Some(&word) {
                        *mismatch = Some(step);
                    }
                }
            }
        }
    }

    /// Number of events so far.
    pub fn len(&self) -> u64 {
        self.inner.steps.get()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of arrays allocated so far.
    pub fn arrays(&self) -> u32 {
        self.inner.next_id.get()
    }

    /// Snapshot of the recorded events (empty unless recording).
    pub fn events(&self) -> Vec<TraceEvent> {
        match &*self.inner.sink.borrow() {
            Sink::Record(words) => words
                .iter()
                .enumerate()
                .map(|(i, &w)| TraceEvent::unpack(w, i as u64))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Ends the execution and reports its trace.
    pub fn finish(&self) -> TraceSummary {
        let len = self.len();
        let arrays = self.arrays();
        let mut sink = self.inner.sink.borrow_mut();
        match &mut *sink {
            Sink::Count => TraceSummary {
                len,
                arrays,
                trace: None,
                verdict: None,
                first_mismatch: None,
            },
            Sink::Record(words) => TraceSummary {
                len,
                arrays,
                trace: Some(PackedTrace {
                    words: std::mem::take(words),
                }),
                verdict: None,
                first_mismatch: None,
            },
            Sink::Verify {
                reference,
                mismatch,
            } => {
                let first = mismatch.or_else(|| {
                    (len != reference.len() as u64).then_some(len.min(reference.len() as u64))
                });
                TraceSummary {
                    len,
                    arrays,
                    trace: None,
                    verdict: Some(first.is_none()),
                    first_mismatch: first,
                }
            }
        }
    }
}

impl fmt::Debug for Tracer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tracer")
            .field("steps", &self.len())
            .field("arrays", &self.arrays())
            .finish()
    }
}

/// Fixed-capacity array whose every access is reported to its tracer before
/// the value is returned or stored.
pub struct TracedArray<T> {
    id: u32,
    cells: Vec<T>,
    tracer: Tracer,
}

impl<T: Clone> TracedArray<T> {
    pub fn new(tracer: &Tracer, capacity: usize, fill: T) -> Self {
        Self::from_vec(tracer, vec![fill; capacity])
    }

    /// Wraps existing contents. Loading the input is not traced.
    pub fn from_vec(tracer: &Tracer, cells: Vec<T>) -> Self {
        let id = tracer.register(cells.len());
        TracedArray {
            id,
            cells,
            tracer: tracer.clone(),
        }
    }

    #[inline]
    pub fn read(&self, i: usize) -> T {
        self.tracer.emit(self.id, i, Access::Read);
        self.cells[i].clone()
    }

    #[inline]
    pub fn write(&mut self, i: usize, value: T) {
        self.tracer.emit(self.id, i, Access::Write);
        self.cells[i] = value;
    }

    /// Reads `lo` and `hi`, then writes both back, swapped when `hi` is
    /// smaller by `cmp`. Same four events as two reads and two writes.
    #[inline]
    pub fn compare_swap(&mut self, lo: usize, hi: usize, cmp: &mut impl FnMut(&T, &T) -> std::cmp::Ordering) {
        self.tracer.emit(self.id, lo, Access::Read);
        self.tracer.emit(self.id, hi, Access::Read);
        if cmp(&self.cells[hi], &self.cells[lo]) == std::cmp::Ordering::Less {
            self.cells.swap(lo, hi);
        }
        self.tracer.emit(self.id, lo, Access::Write);
        self.tracer.emit(self.id, hi, Access::Write);
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn tracer(&self) -> &Tracer {
        &self.tracer
    }

    /// Hands the contents back to the caller as the result of a computation.
    pub fn into_vec(self) -> Vec<T> {
        self.cells
    }

    /// Untraced view for oracles and assertions that run outside the model.
    pub fn contents(&self) -> &[T] {
        &self.cells
    }
}

impl<T: fmt::Debug> fmt::Debug for TracedArray<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TracedArray")
            .field("id", &self.id)
            .field("cells", &self.cells)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_are_recorded_in_order() {
        let t = Tracer::recording();
        let mut a = TracedArray::new(&t, 3, 0u8);
        a.write(2, 7);
        assert_eq!(a.read(2), 7);
        let ev = t.events();
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0].kind, Access::Write);
        assert_eq!(ev[1].index, 2);
        assert!(ev[0].step < ev[1].step);
        assert_eq!(t.capacity_of(a.id()), Some(3));
    }

    #[test]
    fn trace_equal_basics() {
        let t1 = Tracer::recording();
        let a = TracedArray::new(&t1, 2, 0u8);
        a.read(0);
        a.read(1);
        let t2 = Tracer::recording();
        let b = TracedArray::new(&t2, 2, 9u8);
        b.read(0);
        b.read(1);
        assert!(trace_equal(&t1.events(), &t2.events()));
        b.read(1);
        assert!(!trace_equal(&t1.events(), &t2.events()));
    }

    #[test]
    fn verify_mode_finds_first_mismatch() {
        let t1 = Tracer::recording();
        let a = TracedArray::new(&t1, 4, 0u8);
        for i in 0..4 {
            a.read(i);
        }
        let reference = Arc::new(t1.finish().trace.unwrap());
        let t2 = Tracer::verifying(reference.clone());
        let b = TracedArray::new(&t2, 4, 0u8);
        b.read(0);
        b.read(2);
        b.read(2);
        b.read(3);
        let s = t2.finish();
        assert_eq!(s.verdict, Some(false));
        assert_eq!(s.first_mismatch, Some(1));

        let t3 = Tracer::verifying(reference);
        let c = TracedArray::new(&t3, 4, 5u8);
        for i in 0..3 {
            c.read(i);
        }
        let s = t3.finish();
        assert_eq!(s.verdict, Some(false));
        assert_eq!(s.first_mismatch, Some(3));
    }

    #[test]
    fn dump_format() {
        let t = Tracer::recording();
        let mut a = TracedArray::new(&t, 2, 0u8);
        a.read(1);
        a.write(0, 1);
        let mut out = Vec::new();
        t.finish().trace.unwrap().dump(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0 1 r\n0 0 w\n");
    }
}
