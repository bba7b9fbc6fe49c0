#ifndef SUMMATRIX_SUMMATRIX_HPP
#define SUMMATRIX_SUMMATRIX_HPP

#include "summatrix/types.hpp"
#include "summatrix/report.hpp"
#include "summatrix/sequence.hpp"
#include "summatrix/means.hpp"
#include "summatrix/matrix.hpp"
#include "summatrix/indices.hpp"
#include "summatrix/fourier.hpp"
#include "summatrix/checks.hpp"
#include "summatrix/io.hpp"
#include "summatrix/experiment.hpp"

#endif  // SUMMATRIX_SUMMATRIX_HPP
