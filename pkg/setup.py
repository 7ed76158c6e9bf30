import setuptools
from setuptools.config import read_configuration

cfg_dict = read_configuration("setup.cfg")


setuptools.setup(
    package_data={'': ['settings.ini_template']},
    **cfg_dict["metadata"]
)
