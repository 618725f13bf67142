"""Test factories for RIS Alloc inputs."""

# Standard Library
from dataclasses import replace

# Third Party
import numpy as np

# RIS Alloc
from risalloc.channel import CarrierConfig, realize_channels
from risalloc.geometry import NetworkGeometry, RisTier, sample_geometry
from risalloc.simulation import Scheme, SimConfig


class CarrierFactory:
    """Factory for CarrierConfig instances."""

    @classmethod
    def create(cls, **kwargs) -> CarrierConfig:
        """Create a CarrierConfig with the default 15 GHz parameters."""
        return CarrierConfig(**kwargs)


class GeometryFactory:
    """Factory for small random deployments."""

    _counter = 0

    @classmethod
    def create(
        cls,
        n_devices: int = 3,
        n_ris: int = None,
        n_antennas: int = 16,
        ris_rows: int = 4,
        ris_cols: int = 4,
        haps_count: int = 1,
        seed: int = None,
        **kwargs,
    ) -> NetworkGeometry:
        """Draw a deployment; each call without ``seed`` uses a fresh one."""
        cls._counter += 1
        if seed is None:
            seed = 1000 + cls._counter
        return sample_geometry(
            np.random.default_rng(seed),
            n_devices=n_devices,
            n_ris=n_devices if n_ris is None else n_ris,
            n_antennas=n_antennas,
            ris_rows=ris_rows,
            ris_cols=ris_cols,
            haps_count=haps_count,
            **kwargs,
        )

    @classmethod
    def create_fixed(cls, n_antennas: int = 8, ris_rows: int = 2, ris_cols: int = 2) -> NetworkGeometry:
        """Two devices, one terrestrial RIS and one HAPS RIS at hand-picked spots."""
        return NetworkGeometry(
            ap_position=[0.0, 0.0, 25.0],
            ris_positions=[[150.0, 0.0, 25.0], [0.0, 0.0, 20_000.0]],
            ris_tiers=(RisTier.TERRESTRIAL, RisTier.HAPS),
            device_positions=[[120.0, 60.0, 1.5], [-80.0, 140.0, 1.5]],
            n_antennas=n_antennas,
            ris_rows=ris_rows,
            ris_cols=ris_cols,
        )

    @classmethod
    def reset_counter(cls):
        """Reset the counter (useful between test runs)."""
        cls._counter = 0


class RealizationFactory:
    """Factory for channel realizations over small deployments."""

    @classmethod
    def create(cls, carrier: CarrierConfig = None, **kwargs):
        return realize_channels(GeometryFactory.create(**kwargs), carrier or CarrierFactory.create())


class RateMatrixFactory:
    """Factory for random rate matrices indexed ``R[l, k]``."""

    _counter = 0

    @classmethod
    def create(cls, n_ris: int = 5, n_devices: int = 5, seed: int = None, high: float = 10.0) -> np.ndarray:
        cls._counter += 1
        if seed is None:
            seed = 2000 + cls._counter
        return np.random.default_rng(seed).uniform(0.0, high, (n_ris, n_devices))


class ComplexMatrixFactory:
    """Factory for circularly-symmetric Gaussian matrices."""

    @classmethod
    def create(cls, rows: int, cols: int, seed: int = 0) -> np.ndarray:
        rng = np.random.default_rng(seed)
        return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


class SimConfigFactory:
    """Factory for desk-speed SimConfigs (tiny RISs, few antennas, few trials)."""

    @classmethod
    def create(cls, **kwargs) -> SimConfig:
        values = {
            "n_devices": 3,
            "n_antennas": 16,
            "ris_rows": 4,
            "ris_cols": 4,
            "trials": 4,
            "seed": 7,
            "schemes": (Scheme.JBPDA, Scheme.ES, Scheme.GS, Scheme.RS),
            "max_iterations": 30,
            # small cell so 4 x 4-element RISs still give SNRs near one
            "area_side_m": 100.0,
            "ris_ring_radius_m": 30.0,
        }
        values.update(kwargs)
        return SimConfig(**values)

    @classmethod
    def derive(cls, config: SimConfig, **kwargs) -> SimConfig:
        return replace(config, **kwargs)
