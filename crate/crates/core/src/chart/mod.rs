//! Synthetic data tables and chart rendering with ground-truth metadata.

pub mod corpus;
pub mod data;
pub mod render;
pub mod scale;

pub use corpus::{gen_corpus, CorpusError, CorpusItem, CorpusPlan, Mix};
pub use data::{
    synth_spec, synth_spec_constrained, synth_table, topic_bank_len, Attribute, DataRow, DataSpec,
    DataTable, Quantitative, SpecError, TableError, ValueMode,
};
pub use render::{
    format_tick, format_value, mark_elements, nice_max, render_chart, render_chart_with,
    ChartFamily, ChartMeta, ChartType, Layout, MarkBinding, MarkGeometry, RenderError,
    RenderedChart, PALETTE,
};
pub use scale::{make_scale, AxisScale, Orientation, ScaleError};
