#pragma once

#define VMPREDICT_VERSION "0.1.0"
