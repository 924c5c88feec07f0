from setuptools import setup, find_packages

with open("requirements.txt") as f:
    install_requires = [line for line in f.read().strip().split("\n") if line and not line.startswith("#")]

setup(
    name="volsel",
    version="0.1.0",
    description="Hypervolume subset selection: exact solvers, greedy, grid-shifting approximation scheme and hardness instances",
    author="volsel developers",
    packages=find_packages(exclude=["tests", "tests.*"]),
    zip_safe=False,
    include_package_data=True,
    install_requires=install_requires,
    entry_points={"console_scripts": ["volsel = volsel.commands:main"]},
)
