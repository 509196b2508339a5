import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from vmiqa import (
    DirectionalEntropyTransformer,
    TanhTransform,
    VMDMScorer,
    VonMisesQuality,
    degradation_series,
    fit_image,
    mean_directional_entropy,
    pearson,
    vmdm_score,
)


@pytest.fixture(scope="module")
def small(photos):
    return [im[:96, :96] for im in photos.values()]


def test_get_params_and_clone():
    est = VonMisesQuality(window=6, step=0.02)
    assert est.get_params() == {"window": 6, "step": 0.02, "max_iter": 10000, "refine": True}
    cl = clone(est).set_params(window=8)
    assert cl.window == 8 and est.window == 6


def test_entropy_transformer(small):
    est = DirectionalEntropyTransformer()
    out = est.fit_transform(small)
    assert out.shape == (3, 4)
    np.testing.assert_array_equal(out[0], mean_directional_entropy(small[0]).values)
    assert list(est.get_feature_names_out())[0] == "entropy_pi8"


def test_vonmises_quality_matches_functional(small):
    est = VonMisesQuality().fit(small)
    out = est.transform(small)
    fit = fit_image(small[1])
    np.testing.assert_allclose(out[1], [fit.kappa, fit.abs_kappa, fit.mu, fit.epsilon, fit.phi])
    np.testing.assert_array_equal(est.predict(small), out[:, 1])


def test_vonmises_quality_ranks_blur_ladder(photos):
    ladder = degradation_series(photos["coffee"][:128, :128], "blur", 4)
    scores = VonMisesQuality().predict(ladder)
    assert np.all(np.diff(scores) < 0)


def test_validation_errors():
    with pytest.raises(ValueError):
        VonMisesQuality(window=7).fit([np.zeros((8, 8))])
    with pytest.raises(ValueError):
        VonMisesQuality().transform([np.full((8, 8), 2.0)])
    with pytest.raises(ValueError):
        VonMisesQuality().transform(np.zeros((8, 8)))


def test_vmdm_scorer(photos):
    img = photos["rocket"][:128, :128]
    est = VMDMScorer()
    out = est.fit_transform([img])
    assert out.shape == (1, 1)
    assert out[0, 0] == pytest.approx(vmdm_score(img).log_d)
    assert VMDMScorer(log=False).transform([img])[0, 0] == pytest.approx(vmdm_score(img).d)


def test_vmdm_scorer_unstable_policy():
    flat_noise = np.random.default_rng(0).random((48, 48))
    assert np.isnan(VMDMScorer(beta_min=10.0).transform([flat_noise])[0, 0])
    with pytest.raises(ValueError):
        VMDMScorer(beta_min=10.0, on_unstable="raise").transform([flat_noise])


def test_tanh_transform_fit_predict():
    g = np.random.default_rng(1)
    x = np.sort(g.uniform(0, 4, 60))
    y = np.tanh(1.5 * (x - 2)) + g.normal(0, 0.03, 60)
    est = TanhTransform(n_iter=500, random_state=3)
    with pytest.raises(NotFittedError):
        est.predict(x)
    est.fit(x[:, None], y)
    assert est.objective_ >= est.identity_objective_
    assert pearson(est.predict(x), y) >= pearson(x, y)
    assert est.score(x, y) == pytest.approx(est.objective_, abs=1e-9)
    assert est.transform(x).shape == (60, 1)


def test_tanh_transform_in_pipeline(photos):
    ladder = degradation_series(photos["camera"][:96, :96], "blur", 5)
    pipe = make_pipeline(VMDMScorer(), TanhTransform(n_iter=50))
    target = np.arange(5.0)
    pipe.fit(ladder, target)
    assert pipe.predict(ladder).shape == (5,)
