#pragma once

#define RUGGED_VERSION "1.0.0"
