#ifndef GMI_GMI_HPP
#define GMI_GMI_HPP

#include "gmi/category.hpp"
#include "gmi/errors.hpp"
#include "gmi/ingest.hpp"
#include "gmi/report.hpp"
#include "gmi/rubric.hpp"
#include "gmi/schema.hpp"
#include "gmi/scoring.hpp"
#include "gmi/value.hpp"

#endif // GMI_GMI_HPP
