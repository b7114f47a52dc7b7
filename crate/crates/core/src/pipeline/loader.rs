use std::sync::mpsc;
use std::thread;

use crate::data::ExampleIter;
use crate::error::Result;
use crate::sparse::SparseExample;

pub const DEFAULT_CHANNEL_CAPACITY: usize = 1024;

/// Setting this environment variable to `1` selects [`LoaderMode::Inline`].
pub const THREADS_ENV: &str = "OFS_THREADS";

/// How examples get from their source to the learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoaderMode {
    /// Parse on the learner's thread.
    Inline,
    /// A reader thread parses into a bounded FIFO channel of `capacity`
    /// examples; the learner consumes it in order.
    Threaded { capacity: usize },
}

impl Default for LoaderMode {
    fn default() -> Self {
        LoaderMode::Threaded {
            capacity: DEFAULT_CHANNEL_CAPACITY,
        }
    }
}

impl LoaderMode {
    /// Threaded with `capacity`, unless `OFS_THREADS=1` is set.
    pub fn from_env(capacity: usize) -> Self {
        LoaderMode::from_threads_var(std::env::var(THREADS_ENV).ok().as_deref(), capacity)
    }

    pub fn from_threads_var(value: Option<&str>, capacity: usize) -> Self {
        match value.map(str::trim) {
            Some("1") => LoaderMode::Inline,
            _ => LoaderMode::Threaded {
                capacity: capacity.max(1),
            },
        }
    }
}

/// Runs `consume` over the examples of `source`, loading them according to
/// `mode`. Order is preserved and nothing is dropped; the reader stops after
/// forwarding the first error or once `consume` returns.
pub fn with_loaded<T, F>(source: ExampleIter, mode: LoaderMode, consume: F) -> T
where
    F: FnOnce(&mut dyn Iterator<Item = Result<SparseExample>>) -> T,
{
    match mode {
        LoaderMode::Inline => {
            let mut source = source;
            consume(&mut source)
        }
        LoaderMode::Threaded { capacity } => {
            let (tx, rx) = mpsc::sync_channel(capacity.max(1));
            thread::scope(|scope| {
                scope.spawn(move || {
                    for item in source {
                        let failed = item.is_err();
                        if tx.send(item).is_err() || failed {
                            break;
                        }
                    }
                });
                let mut received = rx.into_iter();
                consume(&mut received)
                // dropping `received` unblocks a reader stuck on a full channel
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::sparse::Label;

    fn numbered(n: u32) -> ExampleIter {
        Box::new((0..n).map(|i| SparseExample::new(Label::Positive, [(i, 1.0)])))
    }

    #[test]
    fn threaded_preserves_order() {
        for mode in [
            LoaderMode::Inline,
            LoaderMode::Threaded { capacity: 1 },
            LoaderMode::default(),
        ] {
            let seen: Vec<u32> = with_loaded(numbered(5000), mode, |it| {
                it.map(|e| e.unwrap().indices()[0]).collect()
            });
            assert_eq!(seen, (0..5000).collect::<Vec<_>>());
        }
    }

    #[test]
    fn early_exit_does_not_hang() {
        let first = with_loaded(numbered(100_000), LoaderMode::Threaded { capacity: 2 }, |it| {
            it.take(3).count()
        });
        assert_eq!(first, 3);
    }

    #[test]
    fn reader_stops_after_error() {
        let source: ExampleIter = Box::new(
            vec![
                SparseExample::new(Label::Positive, [(0, 1.0)]),
                Err(Error::Config("boom".into())),
                SparseExample::new(Label::Positive, [(1, 1.0)]),
            ]
            .into_iter(),
        );
        let n = with_loaded(source, LoaderMode::default(), |it| it.count());
        assert_eq!(n, 2);
    }

    #[test]
    fn env_value_selects_mode() {
        assert_eq!(LoaderMode::from_threads_var(Some("1"), 8), LoaderMode::Inline);
        assert_eq!(
            LoaderMode::from_threads_var(Some("2"), 8),
            LoaderMode::Threaded { capacity: 8 }
        );
        assert_eq!(
            LoaderMode::from_threads_var(None, 0),
            LoaderMode::Threaded { capacity: 1 }
        );
    }
}
