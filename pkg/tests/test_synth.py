"""Synthetic-scene generator tests: projection identities, rendered-document
validity, the two-sphere reflection model, and scene (de)serialization."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paintscope import eyelights, perspective, shadows, synth
from paintscope.errors import PreconditionError
from paintscope.model import document_from_bytes, document_to_bytes
from paintscope.synth import (
    DistantLight,
    SceneError,
    SyntheticScene,
    generate_scene,
    render_annotations,
    render_eyelights,
    scene_dumps,
    scene_from_json,
    scene_to_json,
    solve_reflection,
    true_slope,
    true_vanishing_angle_deg,
)


def small_scene(**overrides):
    params = dict(
        camera_height_m=6.0,
        focal_px=900.0,
        image_size=(900, 1200),
        figure_height_m=1.65,
        figure_positions=((0.5, 12.0), (-1.0, 15.0), (2.0, 25.0)),
        sun_azimuth_deg=25.0,
        sun_elevation_deg=42.0,
    )
    params.update(overrides)
    return SyntheticScene(**params)


class TestSceneConstruction:
    def test_valid_scene(self):
        s = small_scene()
        assert true_slope(s) == pytest.approx(1.65 / 6.0, abs=1e-15)

    @pytest.mark.parametrize(
        "overrides",
        [
            {"camera_height_m": 0.0},
            {"camera_height_m": -3.0},
            {"figure_height_m": 0.0},
            {"sun_elevation_deg": 0.0},
            {"sun_elevation_deg": 90.0},
            {"sun_elevation_deg": -10.0},
            {"figure_positions": ((0.0, 0.0),)},
            {"figure_positions": ((0.0, -5.0),)},
            {"image_size": (0, 100)},
            {"focal_px": -1.0},
        ],
    )
    def test_invalid_scene(self, overrides):
        with pytest.raises(SceneError):
            small_scene(**overrides)

    def test_vanishing_angle_formula(self):
        s = small_scene(focal_px=1800.0)
        expected = math.degrees(math.atan(1800.0 * math.tan(math.radians(25.0)) / 900.0))
        assert true_vanishing_angle_deg(s) == pytest.approx(expected, abs=1e-12)
        # with the rendering focal as the assumed focal, angle = azimuth
        assert true_vanishing_angle_deg(s, focal_assumed_px=1800.0) == pytest.approx(
            25.0, abs=1e-12
        )

    def test_side_light_signed_ninety(self):
        assert true_vanishing_angle_deg(small_scene(sun_azimuth_deg=90.0)) == 90.0
        assert true_vanishing_angle_deg(small_scene(sun_azimuth_deg=-90.0)) == -90.0


class TestRenderAnnotations:
    def test_document_is_valid_and_serializable(self):
        doc = render_annotations(small_scene(), painting_id="scene-1", year=1660)
        raw = document_to_bytes(doc)
        assert document_from_bytes(raw) == doc
        assert doc.meta.id == "scene-1"
        assert doc.meta.year == 1660
        assert len(doc.figures) == 3
        assert all(f.shadow_end is not None for f in doc.figures)

    def test_horizon_at_half_height(self):
        doc = render_annotations(small_scene())
        assert doc.horizon.y_h == pytest.approx(600.0, abs=1e-12)

    def test_shadows_can_be_omitted(self):
        doc = render_annotations(small_scene(), include_shadows=False)
        assert all(f.shadow_end is None for f in doc.figures)

    def test_feet_below_heads_and_horizon(self):
        doc = render_annotations(small_scene())
        for f in doc.figures:
            assert f.foot.y > f.head.y
            assert f.foot.y > doc.horizon.y_h

    def test_figure_outside_frame_rejected(self):
        # a figure 50 cm from the camera projects far below the canvas
        with pytest.raises(SceneError, match="figure"):
            render_annotations(small_scene(figure_positions=((0.0, 0.5),)))

    def test_exact_perspective_identity(self):
        scene = small_scene()
        res = perspective.size_gradient(render_annotations(scene))
        assert res.regression.slope == pytest.approx(true_slope(scene), rel=1e-12)
        assert res.viewpoint_height_m == pytest.approx(6.0, rel=1e-12)

    def test_exact_shadow_identity(self):
        scene = generate_scene(seed=2, camera_height_m=7.0, n_figures=10,
                               sun_azimuth_deg=-35.0, sun_elevation_deg=50.0)
        rep = shadows.fit_shadow_vanishing(render_annotations(scene))
        truth = true_vanishing_angle_deg(scene)
        d = abs(rep.theta_deg - truth) % 180.0
        assert min(d, 180.0 - d) <= 0.5
        assert rep.cost < 1e-9


class TestGenerateScene:
    def test_deterministic(self):
        a = generate_scene(seed=42, camera_height_m=5.0, n_figures=6)
        b = generate_scene(seed=42, camera_height_m=5.0, n_figures=6)
        assert a == b

    def test_seed_changes_layout(self):
        a = generate_scene(seed=1, camera_height_m=5.0, n_figures=6)
        b = generate_scene(seed=2, camera_height_m=5.0, n_figures=6)
        assert a.figure_positions != b.figure_positions

    def test_requested_counts_and_params(self):
        s = generate_scene(seed=3, camera_height_m=4.5, n_figures=9,
                           figure_height_m=1.7, sun_azimuth_deg=-60.0)
        assert len(s.figure_positions) == 9
        assert s.camera_height_m == 4.5
        assert s.sun_azimuth_deg == -60.0

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_generated_scenes_always_render(self, seed):
        rng = random.Random(seed)
        scene = generate_scene(
            seed=seed,
            camera_height_m=rng.uniform(2.5, 12.0),
            n_figures=rng.randint(3, 12),
            sun_azimuth_deg=rng.uniform(-80.0, 80.0),
            sun_elevation_deg=rng.uniform(20.0, 70.0),
        )
        doc = render_annotations(scene)
        w, h = scene.image_size
        for f in doc.figures:
            for p in (f.head, f.foot, f.shadow_end):
                assert 0.0 <= p.x <= w and 0.0 <= p.y <= h

    def test_bad_parameters(self):
        with pytest.raises(SceneError):
            generate_scene(seed=0, camera_height_m=-1.0, n_figures=3)
        with pytest.raises(SceneError):
            generate_scene(seed=0, camera_height_m=5.0, n_figures=0)


class TestSceneJson:
    def test_round_trip(self):
        scene = generate_scene(seed=5, camera_height_m=6.5, n_figures=4)
        assert scene_from_json(scene_to_json(scene)) == scene

    def test_dumps_deterministic(self):
        scene = small_scene()
        assert scene_dumps(scene) == scene_dumps(scene)
        assert scene_dumps(scene).endswith("\n")

    def test_malformed_json_rejected(self):
        scene_json = scene_to_json(small_scene())
        del scene_json["camera_height_m"]
        with pytest.raises(SceneError):
            scene_from_json(scene_json)


class TestReflectionModel:
    EYES = ((-31.0, 0.0, 0.0), (31.0, 0.0, 0.0))

    @staticmethod
    def deltas(light, eyes, r=6.0):
        pair = render_eyelights(light, eyes, r)
        tl = eyelights.tilt_angle(pair.left_pupil, pair.left_highlight)
        tr = eyelights.tilt_angle(pair.right_pupil, pair.right_highlight)
        return tl, tr, eyelights.wrap_angle_deg(tr - tl)

    @pytest.mark.parametrize(
        "light",
        [(-40.0, 120.0, 300.0), (55.0, 200.0, 150.0), (0.0, 300.0, 200.0)],
    )
    def test_reflection_law_finite_light(self, light):
        for centre in self.EYES:
            p = solve_reflection(light, centre, 6.0)
            n = tuple((pi - ci) / 6.0 for pi, ci in zip(p, centre))
            assert math.hypot(*(pi - ci for pi, ci in zip(p, centre))) == pytest.approx(
                6.0, abs=1e-9
            )
            to_light = tuple(l - pi for l, pi in zip(light, p))
            norm = math.sqrt(sum(v * v for v in to_light))
            to_light = tuple(v / norm for v in to_light)
            incidence = math.acos(sum(a * b for a, b in zip(n, to_light)))
            reflection = math.acos(n[2])  # viewer along +z
            assert abs(incidence - reflection) < 1e-10

    def test_distant_light_half_vector(self):
        light = DistantLight((0.6, 0.8, 0.0))
        p = solve_reflection(light, (0.0, 0.0, 0.0), 2.0)
        lx, ly, lz = light.direction
        half = (lx, ly, lz + 1.0)
        norm = math.sqrt(sum(v * v for v in half))
        expected = tuple(2.0 * v / norm for v in half)
        assert p == pytest.approx(expected, abs=1e-12)

    def test_above_midline_negative_delta(self):
        _, _, delta = self.deltas((0.0, 300.0, 200.0), self.EYES)
        assert delta == pytest.approx(-11.799250093055345, abs=1e-9)
        assert delta < 0

    def test_below_midline_positive_delta(self):
        tl, tr, delta = self.deltas((0.0, -300.0, 200.0), self.EYES)
        assert delta > 0
        assert abs(tl) > 90 and abs(tr) > 90  # lit from below: tilts flip down

    def test_straight_above_symmetric(self):
        tl, tr, delta = self.deltas((0.0, 1000.0, 0.0), self.EYES)
        assert tl == pytest.approx(-tr, abs=1e-12)
        assert delta < 0

    def test_light_at_infinity_zero_delta(self):
        for direction in [(0.0, 1.0, 0.0), (-0.4, 0.8, 1.0), (0.3, 0.1, 2.0)]:
            _, _, delta = self.deltas(DistantLight(direction), self.EYES)
            assert delta == pytest.approx(0.0, abs=1e-9)

    def test_light_behind_head(self):
        with pytest.raises(SceneError, match="behind"):
            solve_reflection((0.0, 0.0, -500.0), (0.0, 0.0, 0.0), 6.0)
        with pytest.raises(SceneError, match="behind"):
            solve_reflection(DistantLight((0.0, 0.0, -1.0)), (0.0, 0.0, 0.0), 6.0)

    def test_light_along_view_axis(self):
        with pytest.raises(ValueError, match="viewing axis"):
            solve_reflection((0.0, 0.0, 400.0), (0.0, 0.0, 0.0), 6.0)

    def test_light_inside_sphere(self):
        with pytest.raises(ValueError, match="inside"):
            solve_reflection((1.0, 1.0, 1.0), (0.0, 0.0, 0.0), 6.0)

    def test_intersecting_eyes(self):
        with pytest.raises(ValueError, match="intersect"):
            render_eyelights((0.0, 100.0, 100.0), ((-3.0, 0.0, 0.0), (3.0, 0.0, 0.0)), 6.0)

    def test_zero_radius(self):
        with pytest.raises(ValueError, match="radius"):
            solve_reflection((0.0, 100.0, 100.0), (0.0, 0.0, 0.0), 0.0)

    def test_eyes_sorted_left_to_right(self):
        pair = render_eyelights(
            (0.0, 100.0, 100.0), ((31.0, 0.0, 0.0), (-31.0, 0.0, 0.0)), 6.0
        )
        assert pair.left_pupil.x < pair.right_pupil.x

    def test_image_flips_y(self):
        # world y is up; the image point of an elevated highlight has
        # smaller (higher-up) image y than the pupil
        pair = render_eyelights((0.0, 500.0, 100.0), self.EYES, 6.0)
        assert pair.left_highlight.y < pair.left_pupil.y

    @given(
        st.floats(-500, 500),
        st.floats(50, 800),
        st.floats(50, 800),
    )
    @settings(max_examples=60, deadline=None)
    def test_mirror_symmetry_property(self, lx, ly, lz):
        # mirroring the light in x swaps and negates the two tilts
        tl, tr, delta = self.deltas((lx, ly, lz), self.EYES)
        mtl, mtr, mdelta = self.deltas((-lx, ly, lz), self.EYES)
        assert mtl == pytest.approx(-tr, abs=1e-9)
        assert mtr == pytest.approx(-tl, abs=1e-9)
        assert mdelta == pytest.approx(delta, abs=1e-9)
