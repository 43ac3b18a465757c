#pragma once

#include "glcf/error.hpp"
#include "glcf/field.hpp"
#include "glcf/periodic.hpp"
#include "glcf/sequence.hpp"
#include "glcf/matexpr.hpp"
#include "glcf/normal_form.hpp"
#include "glcf/ideals.hpp"
#include "glcf/chain.hpp"
#include "glcf/witnesses.hpp"
#include "glcf/derivations.hpp"
#include "glcf/reindex.hpp"
#include "glcf/render.hpp"
#include "glcf/parser.hpp"
#include "glcf/json_io.hpp"
