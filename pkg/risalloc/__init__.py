"""Initialize the app"""

__version__ = "0.3.0"
__title__ = "RIS Alloc"

__package_name__ = "ris-alloc"
__app_name__ = "ris-alloc"
__app_name_verbose__ = "Dual-tier RIS joint beamforming, power allocation and device association simulator"
