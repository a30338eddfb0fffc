#pragma once

#include "qform/abelian.hpp"
#include "qform/forms.hpp"
#include "qform/fundamental.hpp"
#include "qform/metabolic.hpp"
#include "qform/ru.hpp"
#include "qform/lmonoid.hpp"
#include "qform/stableclass.hpp"
#include "qform/oracle.hpp"
