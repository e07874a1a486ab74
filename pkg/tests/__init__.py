CONFIG_DATA_DIR = "./tests/data/config"
CHECKPOINT_DATA_DIR = "./tests/data/checkpoint"
