import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracopt.errors import (ConfigError, IngestionError, InsufficientDataError,
                            SchemaError)
from fracopt.welldata import (CsvSchema, Dataset, DesignParams,
                              ProductionSeries, SyntheticSpec, TreatmentType,
                              WellRecord, apply_normalizer, fit_normalizer,
                              generate_synthetic, generate_synthetic_detailed,
                              ingest_csv, split_primary_refrac, target_90d,
                              write_csv)
from fracopt.welldata.synthetic import ENV_FEATURES, true_response


def make_csv(tmp_path, text, name="wells.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestIngest:
    HEADER = ("well_id,field_id,layer_id,face_id,well_type,treatment_type,"
              "n_stages,perm,poro,production\n")

    def schema(self):
        return CsvSchema(env_features=["perm", "poro"])

    def test_three_row_file(self, tmp_path):
        p = make_csv(tmp_path, self.HEADER +
                     "W1,F,L,A,vertical,primary,4,12.5,0.2,30:100;95:400\n"
                     "W2,F,L,A,horizontal,primary,8,7.0,0.15,30:90\n"
                     "W3,F,L,B,vertical,refracture,2,3.5,0.1,\n")
        ds = ingest_csv(p, self.schema())
        assert len(ds) == 3
        assert ds.rows[0].environment["perm"] == 12.5
        assert ds.rows[1].n_stages == 8

    def test_unparseable_numeric_becomes_missing(self, tmp_path):
        p = make_csv(tmp_path, self.HEADER +
                     "W1,F,L,A,vertical,primary,4,n/a,0.2,\n")
        ds = ingest_csv(p, self.schema())
        assert len(ds) == 1
        assert ds.rows[0].environment["perm"] is None

    def test_duplicate_well_id_names_duplicate(self, tmp_path):
        p = make_csv(tmp_path, self.HEADER +
                     "W1,F,L,A,vertical,primary,4,1,0.2,\n"
                     "W1,F,L,A,vertical,primary,4,2,0.2,\n")
        with pytest.raises(IngestionError, match="W1"):
            ingest_csv(p, self.schema())

    def test_missing_well_id_column_is_schema_error(self, tmp_path):
        p = make_csv(tmp_path, "name,perm,poro\nW1,1,0.2\n")
        with pytest.raises(SchemaError):
            ingest_csv(p, self.schema())

    def test_label_unification(self, tmp_path):
        schema = self.schema()
        schema.aliases = {"pervichnyi gr": "primary"}
        p = make_csv(tmp_path, self.HEADER +
                     "W1,F,L,A,Vertical ,  Pervichnyi GR ,4,1,0.2,\n")
        ds = ingest_csv(p, schema)
        assert ds.rows[0].treatment_type == TreatmentType.PRIMARY

    def test_round_trip(self, tmp_path):
        ds = generate_synthetic(40, 3, SyntheticSpec(missing_fraction=0.2,
                                                     refrac_fraction=0.3,
                                                     short_history_fraction=0.2))
        schema = write_csv(ds, tmp_path / "out.csv")
        back = ingest_csv(tmp_path / "out.csv", schema)
        assert back.rows == ds.rows


class TestTarget90:
    def test_exact_checkpoint(self):
        s = ProductionSeries([(30, 1000), (60, 2000), (90, 3000)])
        assert target_90d(s) == 3000

    def test_interpolated(self):
        s = ProductionSeries([(20, 500), (50, 1250), (80, 2000), (110, 2750)])
        assert target_90d(s) == pytest.approx(2250, abs=1e-9)

    def test_insufficient_history(self):
        assert target_90d(ProductionSeries([(30, 1000), (60, 2000)])) is None

    def test_empty_series_raises(self):
        with pytest.raises(InsufficientDataError):
            target_90d(ProductionSeries([]))

    def test_single_checkpoint_anchors_at_origin(self):
        assert target_90d(ProductionSeries([(100, 1000)])) == pytest.approx(900.0)

    @given(st.lists(st.tuples(st.floats(1, 200), st.floats(0, 1e5)),
                    min_size=1, max_size=8))
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_production(self, raw):
        days = sorted(d for d, _ in raw)
        fluids = sorted(f for _, f in raw)
        if days[-1] < 90:
            return
        lower = ProductionSeries(list(zip(days, fluids)))
        bumped = ProductionSeries([(d, f + 7.5) for d, f in zip(days, fluids)])
        assert target_90d(bumped) >= target_90d(lower)


class TestNormalizer:
    def dataset(self, values):
        rows = [WellRecord(well_id=f"w{i}", environment={"x": v})
                for i, v in enumerate(values)]
        return Dataset(feature_names=["x"], rows=rows)

    def test_anchors(self):
        ds = self.dataset(list(np.linspace(0, 100, 201)))
        stats = fit_normalizer(ds)
        p1, p99 = stats["x"]
        assert apply_normalizer({"x": p1}, stats)["x"] == 0.0
        assert apply_normalizer({"x": p99}, stats)["x"] == 1.0

    def test_uniform_midpoint(self):
        rng = np.random.default_rng(11)
        vals = rng.uniform(0, 100, 1000)
        ds = self.dataset(list(vals))
        stats = fit_normalizer(ds)
        # independent sorted-array percentile oracle
        s = np.sort(vals)
        def oracle(q):
            pos = (len(s) - 1) * q / 100.0
            lo, hi = int(np.floor(pos)), int(np.ceil(pos))
            return s[lo] + (pos - lo) * (s[hi] - s[lo])
        assert stats["x"][0] == pytest.approx(oracle(1), rel=1e-12)
        assert stats["x"][1] == pytest.approx(oracle(99), rel=1e-12)
        v = apply_normalizer({"x": 50.0}, stats)["x"]
        assert v == pytest.approx(0.5, abs=0.02)

    def test_constant_feature_maps_to_half(self):
        ds = self.dataset([5.0, 5.0, 5.0])
        stats = fit_normalizer(ds)
        assert apply_normalizer({"x": 5.0}, stats)["x"] == 0.5

    def test_missing_stays_missing(self):
        ds = self.dataset([1.0, 2.0, 3.0])
        stats = fit_normalizer(ds)
        assert apply_normalizer({"x": None}, stats)["x"] is None

    def test_unknown_feature_is_schema_error(self):
        ds = self.dataset([1.0, 2.0])
        stats = fit_normalizer(ds)
        with pytest.raises(SchemaError):
            apply_normalizer({"y": 1.0}, stats)

    @given(st.floats(-1e6, 1e6))
    @settings(max_examples=200, deadline=None)
    def test_output_in_unit_interval(self, x):
        ds = self.dataset([1.0, 2.0, 5.0, 9.0, 20.0])
        stats = fit_normalizer(ds)
        v = apply_normalizer({"x": x}, stats)["x"]
        assert 0.0 <= v <= 1.0


class TestSplit:
    def test_partition_sizes(self):
        ds = generate_synthetic(60, 5, SyntheticSpec(refrac_fraction=0.4))
        primary, refrac = split_primary_refrac(ds)
        assert len(primary) + len(refrac) == len(ds)
        assert all(r.treatment_type == TreatmentType.PRIMARY for r in primary)
        assert all(r.treatment_type == TreatmentType.REFRACTURE for r in refrac)
        assert len(refrac) > 0

    def test_all_primary(self):
        ds = generate_synthetic(10, 5)
        primary, refrac = split_primary_refrac(ds)
        assert len(primary) == 10 and len(refrac) == 0

    def test_empty(self):
        ds = Dataset(feature_names=["x"], rows=[])
        primary, refrac = split_primary_refrac(ds)
        assert len(primary) == 0 and len(refrac) == 0


class TestSynthetic:
    def test_deterministic(self, tmp_path):
        a = generate_synthetic(100, 7)
        b = generate_synthetic(100, 7)
        sa = write_csv(a, tmp_path / "a.csv")
        write_csv(b, tmp_path / "b.csv", sa)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_zero_noise_matches_ground_truth(self):
        ds, truth = generate_synthetic_detailed(50, 7, SyntheticSpec(noise_frac=0.0))
        for r in ds:
            d = np.array([r.design.n_stages, r.design.pad_share,
                          r.design.fluid_volume, r.design.proppant_mass,
                          r.design.fluid_rate, r.design.final_prop_conc])
            expected = true_response(r.environment, d)
            assert truth.clean_target[r.well_id] == pytest.approx(expected)
            assert target_90d(r.production) == pytest.approx(expected, rel=1e-9)

    def test_missing_rate(self):
        ds = generate_synthetic(500, 3, SyntheticSpec(missing_fraction=0.2))
        cells = [r.environment[f] for r in ds for f in ENV_FEATURES]
        rate = sum(v is None for v in cells) / len(cells)
        assert rate == pytest.approx(0.2, abs=0.02)

    def test_negative_noise_rejected(self):
        with pytest.raises(ConfigError):
            generate_synthetic(10, 1, SyntheticSpec(noise_frac=-0.1))

    def test_latent_clusters_present(self):
        ds, truth = generate_synthetic_detailed(200, 9)
        labels = {(r.layer_id, r.face_id) for r in ds}
        assert len(labels) >= 3
        assert len(set(truth.cluster_of.values())) >= 3


class TestDesignParams:
    def test_avg_conc_is_derived(self):
        d = DesignParams(proppant_mass=240000.0, fluid_volume=800.0)
        assert d.avg_prop_conc == pytest.approx(300.0)
        assert DesignParams(proppant_mass=100.0).avg_prop_conc is None

    def test_invariants(self):
        with pytest.raises(IngestionError):
            DesignParams(pad_share=1.5)
        with pytest.raises(IngestionError):
            DesignParams(fluid_volume=-10)
        with pytest.raises(IngestionError):
            ProductionSeries([(30, 100), (20, 200)])
