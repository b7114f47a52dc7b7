//! Indexed max-heap holding the `B` most confident (smallest covariance)
//! features seen so far.
//!
//! Entries are ordered by the key `(value, index)`: a smaller value is more
//! confident and, between equal values, the lower feature index wins. The
//! root is therefore the least confident kept feature and acts as the
//! admission threshold.
//!
//! Covariance values only ever decrease, so a kept entry whose value is
//! lowered can only move towards the leaves and a single sift-down restores
//! the heap. The tracker relies on that: offering a larger value for a kept
//! feature is a contract violation and panics.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use crate::error::{Error, Result};

/// What happened to an offered feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offer {
    /// Already kept; its value was lowered in place.
    AdjustedInPlace,
    /// Newly kept while the heap still had room.
    Admitted,
    /// Newly kept; the previous root (the carried index) was dropped.
    AdmittedEvicting(usize),
    /// Not confident enough to be kept.
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    index: usize,
    value: f64,
}

impl Entry {
    /// True if `self` ranks above `other` in the max-heap, i.e. is less
    /// confident.
    #[inline]
    fn above(&self, other: &Entry) -> bool {
        self.value > other.value || (self.value == other.value && self.index > other.index)
    }
}

/// Multiplicative hash for feature indices; SipHash dominates the update
/// cost otherwise.
#[derive(Default, Clone, Copy)]
struct IndexHasher(u64);

impl Hasher for IndexHasher {
    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(u64::from(b));
        }
    }

    #[inline]
    fn write_u64(&mut self, n: u64) {
        let h = (self.0 ^ n).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        self.0 = h ^ (h >> 29);
    }

    #[inline]
    fn write_usize(&mut self, n: usize) {
        self.write_u64(n as u64);
    }
}

type SlotMap = HashMap<usize, usize, BuildHasherDefault<IndexHasher>>;

#[derive(Debug, Clone)]
pub struct TopBTracker {
    capacity: usize,
    heap: Vec<Entry>,
    slot_of: SlotMap,
    comparisons: u64,
}

impl TopBTracker {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::config("feature budget must be at least 1"));
        }
        Ok(TopBTracker {
            capacity,
            heap: Vec::with_capacity(capacity.min(1 << 20)),
            slot_of: SlotMap::with_capacity_and_hasher(capacity.min(1 << 20), Default::default()),
            comparisons: 0,
        })
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.heap.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.heap.len() == self.capacity
    }

    #[inline]
    pub fn contains(&self, idx: usize) -> bool {
        self.slot_of.contains_key(&idx)
    }

    /// Stored value for a kept feature.
    pub fn value_of(&self, idx: usize) -> Option<f64> {
        self.slot_of.get(&idx).map(|&p| self.heap[p].value)
    }

    /// The admission threshold: the root value once the heap is full, `None`
    /// while anything is still admitted unconditionally.
    pub fn limit(&self) -> Option<f64> {
        if self.is_full() {
            self.heap.first().map(|e| e.value)
        } else {
            None
        }
    }

    /// Kept `(index, value)` pairs in heap order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.heap.iter().map(|e| (e.index, e.value))
    }

    /// Total key comparisons performed so far.
    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    /// Offers feature `idx` with its current covariance `value`.
    ///
    /// Panics if `value` is not a positive finite number, or if `idx` is
    /// already kept with a smaller value.
    pub fn offer(&mut self, idx: usize, value: f64) -> Offer {
        assert!(
            value > 0.0 && value.is_finite(),
            "covariance must be positive and finite, got {value} for feature {idx}"
        );
        let entry = Entry { index: idx, value };

        if let Some(&pos) = self.slot_of.get(&idx) {
            let stored = self.heap[pos].value;
            assert!(
                value <= stored,
                "covariance of feature {idx} increased from {stored} to {value}"
            );
            self.heap[pos].value = value;
            self.sift_down(pos);
            return Offer::AdjustedInPlace;
        }

        if self.heap.len() < self.capacity {
            let pos = self.heap.len();
            self.heap.push(entry);
            self.slot_of.insert(idx, pos);
            self.sift_up(pos);
            return Offer::Admitted;
        }

        self.comparisons += 1;
        if self.heap[0].above(&entry) {
            let evicted = self.heap[0].index;
            self.slot_of.remove(&evicted);
            self.heap[0] = entry;
            self.slot_of.insert(idx, 0);
            self.sift_down(0);
            Offer::AdmittedEvicting(evicted)
        } else {
            Offer::Rejected
        }
    }

    fn sift_up(&mut self, mut pos: usize) {
        while pos > 0 {
            let parent = (pos - 1) / 2;
            self.comparisons += 1;
            if self.heap[pos].above(&self.heap[parent]) {
                self.swap(pos, parent);
                pos = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut pos: usize) {
        let len = self.heap.len();
        loop {
            let left = 2 * pos + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let mut child = left;
            if right < len {
                self.comparisons += 1;
                if self.heap[right].above(&self.heap[left]) {
                    child = right;
                }
            }
            self.comparisons += 1;
            if self.heap[child].above(&self.heap[pos]) {
                self.swap(pos, child);
                pos = child;
            } else {
                break;
            }
        }
    }

    #[inline]
    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.slot_of.insert(self.heap[a].index, a);
        self.slot_of.insert(self.heap[b].index, b);
    }

    /// Checks the heap property and the index map. Returns a description of
    /// the first violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.heap.len() > self.capacity {
            return Err(format!(
                "size {} exceeds capacity {}",
                self.heap.len(),
                self.capacity
            ));
        }
        if self.slot_of.len() != self.heap.len() {
            return Err(format!(
                "index map has {} entries, heap has {}",
                self.slot_of.len(),
                self.heap.len()
            ));
        }
        for (pos, e) in self.heap.iter().enumerate() {
            if self.slot_of.get(&e.index) != Some(&pos) {
                return Err(format!("feature {} at slot {pos} is mis-indexed", e.index));
            }
            if pos > 0 {
                let parent = &self.heap[(pos - 1) / 2];
                if e.above(parent) {
                    return Err(format!("slot {pos} ranks above its parent"));
                }
            }
        }
        Ok(())
    }
}
