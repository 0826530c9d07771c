#pragma once

namespace mncl {

double db_to_ratio(double db);
double ratio_to_db(double ratio);

inline double dbm_to_mw(double dbm) { return db_to_ratio(dbm); }
inline double mw_to_dbm(double mw) { return ratio_to_db(mw); }

} // namespace mncl
