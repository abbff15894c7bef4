//! wasm-bindgen front end for `www/index.html`.

pub mod demo;

use wasm_bindgen::prelude::*;

fn js_err(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub struct SpCurve(demo::SpCurve);

#[wasm_bindgen]
impl SpCurve {
    #[wasm_bindgen(getter)]
    pub fn pi_p(&self) -> f64 {
        self.0.pi_p
    }

    #[wasm_bindgen(getter)]
    pub fn phase(&self) -> Vec<f64> {
        self.0.phase.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn sine(&self) -> Vec<f64> {
        self.0.sine.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn cosine(&self) -> Vec<f64> {
        self.0.cosine.clone()
    }
}

/// `S_p`, `S_p'` over `[0, 2π_p]`.
#[wasm_bindgen(js_name = spCurve)]
pub fn sp_curve(p: f64, samples: usize) -> Result<SpCurve, JsError> {
    demo::sp_curve(p, samples).map(SpCurve).map_err(js_err)
}

#[wasm_bindgen]
pub struct Nodes(demo::Nodes);

#[wasm_bindgen]
impl Nodes {
    #[wasm_bindgen(getter)]
    pub fn lambda(&self) -> f64 {
        self.0.lambda
    }

    #[wasm_bindgen(getter, js_name = nodalPoints)]
    pub fn nodal_points(&self) -> Vec<f64> {
        self.0.nodal_points.clone()
    }

    #[wasm_bindgen(getter, js_name = scaledLengths)]
    pub fn scaled_lengths(&self) -> Vec<f64> {
        self.0.scaled_lengths.clone()
    }

    #[wasm_bindgen(getter, js_name = scaledPredicted)]
    pub fn scaled_predicted(&self) -> Vec<f64> {
        self.0.scaled_predicted.clone()
    }
}

/// Eigenvalue and nodal data for `q = a cos 2πx`, `r = b x(1-x)`.
#[wasm_bindgen]
pub fn nodes(p: f64, a: f64, b: f64, n: usize) -> Result<Nodes, JsError> {
    demo::nodes(p, a, b, n).map(Nodes).map_err(js_err)
}

#[wasm_bindgen]
pub struct Overlay(demo::Overlay);

#[wasm_bindgen]
impl Overlay {
    #[wasm_bindgen(getter)]
    pub fn grid(&self) -> Vec<f64> {
        self.0.grid.clone()
    }

    #[wasm_bindgen(getter, js_name = qHat)]
    pub fn q_hat(&self) -> Vec<f64> {
        self.0.q_hat.clone()
    }

    #[wasm_bindgen(getter, js_name = qTrue)]
    pub fn q_true(&self) -> Vec<f64> {
        self.0.q_true.clone()
    }

    #[wasm_bindgen(getter, js_name = supError)]
    pub fn sup_error(&self) -> f64 {
        self.0.sup_error
    }

    #[wasm_bindgen(getter, js_name = noiseFloor)]
    pub fn noise_floor(&self) -> f64 {
        self.0.noise_floor
    }
}

/// Reconstruction of `q` from the nodal lengths of the `n`-th eigenfunction.
#[wasm_bindgen]
pub fn reconstruct(p: f64, a: f64, b: f64, n: usize, grid_size: usize) -> Result<Overlay, JsError> {
    demo::reconstruction(p, a, b, n, grid_size).map(Overlay).map_err(js_err)
}
