#include <string>
#include <utility>
#include <vector>

#include "assetdb/clean.hpp"

namespace assetdb::clean {

// (recognizable name → canonical form). Canonical forms follow common short
// English names; the US spelling variants all collapse onto "USA" to match
// the location standardization. Matching rules live in clean.cpp.
const std::vector<std::pair<std::string, std::string>>& country_gazetteer() {
    static const std::vector<std::pair<std::string, std::string>> kCountries = {
        {"Afghanistan", "Afghanistan"},
        {"Albania", "Albania"},
        {"Algeria", "Algeria"},
        {"Andorra", "Andorra"},
        {"Angola", "Angola"},
        {"Antigua and Barbuda", "Antigua and Barbuda"},
        {"Argentina", "Argentina"},
        {"Armenia", "Armenia"},
        {"Australia", "Australia"},
        {"Austria", "Austria"},
        {"Azerbaijan", "Azerbaijan"},
        {"Bahamas", "Bahamas"},
        {"Bahrain", "Bahrain"},
        {"Bangladesh", "Bangladesh"},
        {"Barbados", "Barbados"},
        {"Belarus", "Belarus"},
        {"Belgium", "Belgium"},
        {"Belize", "Belize"},
        {"Benin", "Benin"},
        {"Bhutan", "Bhutan"},
        {"Bolivia", "Bolivia"},
        {"Bosnia and Herzegovina", "Bosnia and Herzegovina"},
        {"Botswana", "Botswana"},
        {"Brazil", "Brazil"},
        {"Brunei", "Brunei"},
        {"Bulgaria", "Bulgaria"},
        {"Burkina Faso", "Burkina Faso"},
        {"Burma", "Myanmar"},
        {"Burundi", "Burundi"},
        {"Cabo Verde", "Cabo Verde"},
        {"Cape Verde", "Cabo Verde"},
        {"Cambodia", "Cambodia"},
        {"Cameroon", "Cameroon"},
        {"Canada", "Canada"},
        {"Central African Republic", "Central African Republic"},
        {"Chad", "Chad"},
        {"Chile", "Chile"},
        {"China", "China"},
        {"Colombia", "Colombia"},
        {"Comoros", "Comoros"},
        {"Democratic Republic of the Congo", "Democratic Republic of the Congo"},
        {"DR Congo", "Democratic Republic of the Congo"},
        {"DRC", "Democratic Republic of the Congo"},
        {"Congo-Kinshasa", "Democratic Republic of the Congo"},
        {"Republic of the Congo", "Republic of the Congo"},
        {"Congo", "Republic of the Congo"},
        {"Costa Rica", "Costa Rica"},
        {"Ivory Coast", "Ivory Coast"},
        {"Cote d'Ivoire", "Ivory Coast"},
        {"Côte d'Ivoire", "Ivory Coast"},
        {"Croatia", "Croatia"},
        {"Cuba", "Cuba"},
        {"Cyprus", "Cyprus"},
        {"Czech Republic", "Czech Republic"},
        {"Czechia", "Czech Republic"},
        {"Denmark", "Denmark"},
        {"Djibouti", "Djibouti"},
        {"Dominican Republic", "Dominican Republic"},
        {"Dominica", "Dominica"},
        {"Ecuador", "Ecuador"},
        {"Egypt", "Egypt"},
        {"El Salvador", "El Salvador"},
        {"Equatorial Guinea", "Equatorial Guinea"},
        {"Eritrea", "Eritrea"},
        {"Estonia", "Estonia"},
        {"Eswatini", "Eswatini"},
        {"Swaziland", "Eswatini"},
        {"Ethiopia", "Ethiopia"},
        {"Fiji", "Fiji"},
        {"Finland", "Finland"},
        {"France", "France"},
        {"Gabon", "Gabon"},
        {"Gambia", "Gambia"},
        {"Georgia", "Georgia"},
        {"Germany", "Germany"},
        {"Ghana", "Ghana"},
        {"Greece", "Greece"},
        {"Grenada", "Grenada"},
        {"Guatemala", "Guatemala"},
        {"Guinea-Bissau", "Guinea-Bissau"},
        {"Guinea", "Guinea"},
        {"Guyana", "Guyana"},
        {"Haiti", "Haiti"},
        {"Honduras", "Honduras"},
        {"Hungary", "Hungary"},
        {"Iceland", "Iceland"},
        {"India", "India"},
        {"Indonesia", "Indonesia"},
        {"Iran", "Iran"},
        {"Iraq", "Iraq"},
        {"Ireland", "Ireland"},
        {"Israel", "Israel"},
        {"Italy", "Italy"},
        {"Jamaica", "Jamaica"},
        {"Japan", "Japan"},
        {"Jordan", "Jordan"},
        {"Kazakhstan", "Kazakhstan"},
        {"Kenya", "Kenya"},
        {"Kiribati", "Kiribati"},
        {"Kosovo", "Kosovo"},
        {"Kuwait", "Kuwait"},
        {"Kyrgyzstan", "Kyrgyzstan"},
        {"Laos", "Laos"},
        {"Latvia", "Latvia"},
        {"Lebanon", "Lebanon"},
        {"Lesotho", "Lesotho"},
        {"Liberia", "Liberia"},
        {"Libya", "Libya"},
        {"Liechtenstein", "Liechtenstein"},
        {"Lithuania", "Lithuania"},
        {"Luxembourg", "Luxembourg"},
        {"Madagascar", "Madagascar"},
        {"Malawi", "Malawi"},
        {"Malaysia", "Malaysia"},
        {"Maldives", "Maldives"},
        {"Mali", "Mali"},
        {"Malta", "Malta"},
        {"Marshall Islands", "Marshall Islands"},
        {"Mauritania", "Mauritania"},
        {"Mauritius", "Mauritius"},
        {"Mexico", "Mexico"},
        {"Micronesia", "Micronesia"},
        {"Moldova", "Moldova"},
        {"Monaco", "Monaco"},
        {"Mongolia", "Mongolia"},
        {"Montenegro", "Montenegro"},
        {"Morocco", "Morocco"},
        {"Mozambique", "Mozambique"},
        {"Myanmar", "Myanmar"},
        {"Namibia", "Namibia"},
        {"Nauru", "Nauru"},
        {"Nepal", "Nepal"},
        {"Netherlands", "Netherlands"},
        {"New Zealand", "New Zealand"},
        {"Nicaragua", "Nicaragua"},
        {"Nigeria", "Nigeria"},
        {"Niger", "Niger"},
        {"North Korea", "North Korea"},
        {"North Macedonia", "North Macedonia"},
        {"Macedonia", "North Macedonia"},
        {"Norway", "Norway"},
        {"Oman", "Oman"},
        {"Pakistan", "Pakistan"},
        {"Palau", "Palau"},
        {"Panama", "Panama"},
        {"Papua New Guinea", "Papua New Guinea"},
        {"Paraguay", "Paraguay"},
        {"Peru", "Peru"},
        {"Philippines", "Philippines"},
        {"Poland", "Poland"},
        {"Portugal", "Portugal"},
        {"Qatar", "Qatar"},
        {"Romania", "Romania"},
        {"Russia", "Russia"},
        {"Russian Federation", "Russia"},
        {"Rwanda", "Rwanda"},
        {"Saint Kitts and Nevis", "Saint Kitts and Nevis"},
        {"Saint Lucia", "Saint Lucia"},
        {"Saint Vincent and the Grenadines", "Saint Vincent and the Grenadines"},
        {"Samoa", "Samoa"},
        {"San Marino", "San Marino"},
        {"Sao Tome and Principe", "Sao Tome and Principe"},
        {"Saudi Arabia", "Saudi Arabia"},
        {"Senegal", "Senegal"},
        {"Serbia", "Serbia"},
        {"Seychelles", "Seychelles"},
        {"Sierra Leone", "Sierra Leone"},
        {"Singapore", "Singapore"},
        {"Slovakia", "Slovakia"},
        {"Slovenia", "Slovenia"},
        {"Solomon Islands", "Solomon Islands"},
        {"Somalia", "Somalia"},
        {"South Africa", "South Africa"},
        {"South Korea", "South Korea"},
        {"Republic of Korea", "South Korea"},
        {"South Sudan", "South Sudan"},
        {"Spain", "Spain"},
        {"Sri Lanka", "Sri Lanka"},
        {"Sudan", "Sudan"},
        {"Suriname", "Suriname"},
        {"Sweden", "Sweden"},
        {"Switzerland", "Switzerland"},
        {"Syria", "Syria"},
        {"Taiwan", "Taiwan"},
        {"Tajikistan", "Tajikistan"},
        {"Tanzania", "Tanzania"},
        {"Thailand", "Thailand"},
        {"Timor-Leste", "Timor-Leste"},
        {"East Timor", "Timor-Leste"},
        {"Togo", "Togo"},
        {"Tonga", "Tonga"},
        {"Trinidad and Tobago", "Trinidad and Tobago"},
        {"Tunisia", "Tunisia"},
        {"Turkey", "Turkey"},
        {"Türkiye", "Turkey"},
        {"Turkmenistan", "Turkmenistan"},
        {"Tuvalu", "Tuvalu"},
        {"Uganda", "Uganda"},
        {"Ukraine", "Ukraine"},
        {"United Arab Emirates", "United Arab Emirates"},
        {"UAE", "United Arab Emirates"},
        {"United Kingdom", "United Kingdom"},
        {"Great Britain", "United Kingdom"},
        {"UK", "United Kingdom"},
        {"U.K.", "United Kingdom"},
        {"England", "United Kingdom"},
        {"Scotland", "United Kingdom"},
        {"Wales", "United Kingdom"},
        {"United States of America", "USA"},
        {"United States", "USA"},
        {"USAA.", "USA"},
        {"USAA", "USA"},
        {"U.S.A.", "USA"},
        {"U.S.", "USA"},
        {"USA", "USA"},
        {"US", "USA"},
        {"Uruguay", "Uruguay"},
        {"Uzbekistan", "Uzbekistan"},
        {"Vanuatu", "Vanuatu"},
        {"Vatican City", "Vatican City"},
        {"Venezuela", "Venezuela"},
        {"Vietnam", "Vietnam"},
        {"Yemen", "Yemen"},
        {"Zambia", "Zambia"},
        {"Zimbabwe", "Zimbabwe"},
    };
    return kCountries;
}

}  // namespace assetdb::clean
