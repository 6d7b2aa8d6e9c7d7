//! Time series classification with 1-nearest-neighbor DTW under learned
//! per-class Ratanamahatana-Keogh bands.
//!
//! The pipeline shortens long series ([`series::preprocess`]), learns one
//! band per class by boundary extraction and iterative hill-climbing scored
//! with a band-aware silhouette index ([`learning`]), and classifies with
//! LB_Keogh-pruned 1-NN search ([`classifier`]).

pub mod band;
pub mod classifier;
pub mod cli;
pub mod dataset_file;
pub mod dtw;
mod error;
pub mod learning;
pub mod series;
pub mod silhouette;
pub mod synthetic;

pub use band::{Adjustment, BandSet, RkBand};
pub use classifier::{
    loo_accuracy, predict_1nn, run_pipeline, ClassifierModel, NearestNeighbor, PipelineConfig,
    PipelineOutput,
};
pub use dtw::{dtw_distance, dtw_path, lb_keogh, CostMatrix, Envelope, WarpingPath};
pub use error::{Error, Result};
pub use learning::{
    best_warping_window, extract_boundary_bands, hillclimb_learn, iterative_learn,
    learn_best_band, Direction, HillClimbConfig, LearningLog,
};
pub use series::{complexity, preprocess, Label, LabeledDataset, TimeSeries};
pub use silhouette::{evaluate, silhouette, silhouette_item, SilhouetteReport};
