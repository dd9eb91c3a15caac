use super::{Action, Modality, Payload, SessionTrace, TraceError};

/// Nominal speaking time of one word.
pub const DEFAULT_SEGMENT_MS: f64 = 300.0;

/// One input or output sub-segment: a text token, a raw speech read, or a
/// fixed-length speech slice after [`ChunkedSession::subsegment_speech`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unit {
    /// `None` for text tokens.
    pub duration_ms: Option<f64>,
    pub ts_ms: Option<f64>,
}

/// A maximal run of reads paired with the maximal run of writes that follows it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Chunk {
    pub input: Vec<Unit>,
    pub output: Vec<Unit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChunkedSession {
    pub src: Modality,
    pub tgt: Modality,
    pub chunks: Vec<Chunk>,
    /// Reads after the final write. They belong to no chunk but still count
    /// toward the source length.
    pub trailing: Vec<Unit>,
    pub reference_len: Option<usize>,
}

fn units_of(payload: &Payload, ts_ms: Option<f64>) -> Vec<Unit> {
    match payload {
        Payload::Tokens(toks) => toks
            .iter()
            .flat_map(|t| t.split_whitespace())
            .map(|_| Unit { duration_ms: None, ts_ms })
            .collect(),
        Payload::DurationMs(ms) => vec![Unit {
            duration_ms: Some(*ms),
            ts_ms,
        }],
    }
}

/// Groups a (validated) trace into chunks by maximal READ/WRITE runs.
///
/// A write run with no preceding read becomes chunk 1 with an empty input.
pub fn derive_chunks(trace: &SessionTrace) -> ChunkedSession {
    let mut chunks = Vec::new();
    let mut pending_reads: Vec<Unit> = Vec::new();
    let mut current: Option<Chunk> = None;
    for event in &trace.events {
        let units = units_of(&event.payload, event.ts_ms);
        match event.action {
            Action::Read => {
                if let Some(done) = current.take() {
                    chunks.push(done);
                }
                pending_reads.extend(units);
            }
            Action::Write => {
                let chunk = current.get_or_insert_with(|| Chunk {
                    input: std::mem::take(&mut pending_reads),
                    output: Vec::new(),
                });
                chunk.output.extend(units);
            }
        }
    }
    if let Some(done) = current.take() {
        chunks.push(done);
    }
    ChunkedSession {
        src: trace.src,
        tgt: trace.tgt,
        chunks,
        trailing: pending_reads,
        reference_len: trace.reference.as_ref().map(Vec::len),
    }
}

/// Cuts a speech run of total duration `total` into `seg_ms` slices with a
/// shorter final remainder.
fn slice_duration(total: f64, seg_ms: f64, ts_ms: Option<f64>) -> Vec<Unit> {
    let mut count = (total / seg_ms).ceil() as usize;
    // guard against ceil() overshooting on values like 0.9 / 0.3
    while count > 0 && total - (count - 1) as f64 * seg_ms <= 1e-9 * seg_ms {
        count -= 1;
    }
    (0..count)
        .map(|i| {
            let len = if i + 1 == count {
                total - (count - 1) as f64 * seg_ms
            } else {
                seg_ms
            };
            Unit {
                duration_ms: Some(len),
                ts_ms,
            }
        })
        .collect()
}

fn resegment(units: &[Unit], seg_ms: f64) -> Vec<Unit> {
    let total: f64 = units.iter().filter_map(|u| u.duration_ms).sum();
    let ts = units.iter().rev().find_map(|u| u.ts_ms);
    slice_duration(total, seg_ms, ts)
}

impl ChunkedSession {
    pub fn num_chunks(&self) -> usize {
        self.chunks.len()
    }

    /// |x|: every input sub-segment, trailing reads included.
    pub fn src_len(&self) -> usize {
        self.chunks.iter().map(|c| c.input.len()).sum::<usize>() + self.trailing.len()
    }

    /// |y|
    pub fn tgt_len(&self) -> usize {
        self.chunks.iter().map(|c| c.output.len()).sum()
    }

    /// Cumulative input lengths; index 0 is the empty prefix, so the vector
    /// has `num_chunks() + 1` entries.
    pub fn cum_in(&self) -> Vec<usize> {
        cumulative(self.chunks.iter().map(|c| c.input.len()))
    }

    pub fn cum_out(&self) -> Vec<usize> {
        cumulative(self.chunks.iter().map(|c| c.output.len()))
    }

    /// 1-based chunk number of every output sub-segment.
    pub fn output_chunk_index(&self) -> Vec<usize> {
        self.chunks
            .iter()
            .enumerate()
            .flat_map(|(c, chunk)| std::iter::repeat(c + 1).take(chunk.output.len()))
            .collect()
    }

    /// g(τ): input sub-segments available when output τ is produced.
    pub fn delay_function_g(&self) -> Vec<usize> {
        let cum_in = self.cum_in();
        self.output_chunk_index()
            .into_iter()
            .map(|c| cum_in[c])
            .collect()
    }

    /// Chunk sizes as `(|x^c|, |y^c|)` pairs.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.chunks
            .iter()
            .map(|c| (c.input.len(), c.output.len()))
            .collect()
    }

    pub fn has_leading_write(&self) -> bool {
        self.chunks.first().is_some_and(|c| c.input.is_empty())
    }

    /// Re-cuts every speech side into `seg_ms` slices measured from the start
    /// of each chunk. Text sides are left untouched. A zero-length chunk side
    /// becomes empty.
    pub fn subsegment_speech(&self, seg_ms: f64) -> Result<ChunkedSession, TraceError> {
        if !(seg_ms > 0.0) || !seg_ms.is_finite() {
            return Err(TraceError::NonPositiveSegmentLength(seg_ms));
        }
        let src_speech = self.src == Modality::Speech;
        let tgt_speech = self.tgt == Modality::Speech;
        let chunks = self
            .chunks
            .iter()
            .map(|c| Chunk {
                input: if src_speech {
                    resegment(&c.input, seg_ms)
                } else {
                    c.input.clone()
                },
                output: if tgt_speech {
                    resegment(&c.output, seg_ms)
                } else {
                    c.output.clone()
                },
            })
            .collect();
        let trailing = if src_speech {
            resegment(&self.trailing, seg_ms)
        } else {
            self.trailing.clone()
        };
        Ok(ChunkedSession {
            chunks,
            trailing,
            ..self.clone()
        })
    }

    /// Builds a text/text session directly from chunk sizes, for hand-built
    /// examples and simulations.
    pub fn from_shape(shape: &[(usize, usize)], trailing_reads: usize) -> Self {
        let token = Unit {
            duration_ms: None,
            ts_ms: None,
        };
        ChunkedSession {
            src: Modality::Text,
            tgt: Modality::Text,
            chunks: shape
                .iter()
                .map(|&(i, o)| Chunk {
                    input: vec![token; i],
                    output: vec![token; o],
                })
                .collect(),
            trailing: vec![token; trailing_reads],
            reference_len: None,
        }
    }
}

fn cumulative(lens: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    let mut acc = 0;
    for len in lens {
        acc += len;
        out.push(acc);
    }
    out
}
