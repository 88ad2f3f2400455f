"""One CLI invocation per bundled fixture (and per analysis on it)."""

FIXTURE_COMMANDS = [
    ["value", "aditi.scenario.json", "aditi", "home"],
    ["value", "aditi-far.scenario.json", "aditi", "home", "--with", "bus"],
    ["value", "movie.scenario.json", "jack", "home-home"],
    ["gain", "aditi-far.scenario.json", "aditi", "home", "bus"],
    ["gain", "aditi-far.scenario.json", "neighbor", "home", "bus"],
    ["gain", "movie.scenario.json", "shiva", "home-home", "accessible-transit"],
    ["greedy", "aditi.scenario.json", "aditi", "home"],
    ["value", "gun-school.scenario.json", "carrier", "street"],
    ["compare", "pool-bus.scenario.json", "pool-bus.origins.json", "pool", "bus"],
    ["compare", "pool-bus.scenario.json", "pool-bus.origins.json", "pool", "bus",
     "--aggregator", "prioritarian"],
    ["compare", "pool-bus.scenario.json", "pool-bus.origins.json", "pool", "bus",
     "--aggregator", "maximin"],
    ["independence", "aditi.scenario.json"],
    ["independence", "aditi-shop.scenario.json"],
    ["independence", "gun-school.scenario.json"],
    ["independence", "snoring.scenario.json"],
    ["independence", "product.scenario.json"],
    ["independence", "movie.scenario.json"],
    ["transfer", "transfer.scenario.json", "transfer", "status-quo"],
    ["transfer", "transfer.scenario.json", "reverse-transfer", "transferred"],
    ["value", "sale.scenario.json", "ravi", "start"],
    ["equilibrium", "sale.game.json"],
    ["equilibrium", "threat.game.json"],
    ["deter", "threat.game.json", "threaten", "buy", "sell"],
    ["paradox", "sen-lady-chatterley.profile.json"],
    ["paradox", "sen-lady-chatterley.profile.json", "--policy", "pareto-first"],
    ["pivot", "--k", "22000", "--h", "1e9", "--epsilon", "0.01", "--population", "100000",
     "--cost", "500"],
    ["pivot", "--k", "2", "--exact"],
]
