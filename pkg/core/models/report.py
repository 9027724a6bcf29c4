from pydantic import BaseModel


class BenchmarkTally(BaseModel):
    solved: int = 0
    total: int = 0


class ConfigRow(BaseModel):
    n: int
    r: int
    # benchmark display name -> cases solved by this configuration
    solved: dict[str, int] = {}

    @property
    def label(self):
        return f"n={self.n}, r={self.r}"

    @property
    def total_solved(self):
        return sum(self.solved.values())


class Totals(BaseModel):
    solved: int = 0
    total: int = 0
    rate: float = 0.0


class SweepPoint(BaseModel):
    x: int
    y: int


class Sweep(BaseModel):
    """Cumulative solved cases as one parameter grows, the other held at the run's value"""
    name: str
    parameter: str
    n: int
    r: int
    points: list[SweepPoint] = []


class RunReport(BaseModel):
    benchmarks: list[str] = []
    per_benchmark: dict[str, BenchmarkTally] = {}
    per_config: list[ConfigRow] = []
    totals: Totals = Totals()
    parameter_sweeps: list[Sweep] = []
    flagged: list[str] = []
    run_labels: list[str] = []
