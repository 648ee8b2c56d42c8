//! Shared fixtures for the criterion benches.

use modfio_core::{make_grid, ChirpedGaussian, Grid1D, Signal, Window};

pub fn grid(n: usize) -> Grid1D {
    make_grid(n, (n as f64).sqrt() * 1.5).expect("power-of-two grid")
}

pub fn gaussian(grid: Grid1D, lambda: f64) -> Signal {
    ChirpedGaussian::dilated(lambda, 1).and_then(|g| g.sample(grid)).expect("sampled Gaussian")
}

pub fn window(grid: Grid1D) -> Window {
    Window::gaussian(grid).expect("Gaussian window fits the grid")
}
