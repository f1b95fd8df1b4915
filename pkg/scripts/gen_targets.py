"""Regenerates src/osdg/data/sdg_targets.json (17 goals, 169 targets).

Target descriptions are short paraphrases of the 2030 Agenda framework;
indicator lists are abbreviated to the first indicator code per target.
"""

import json
from pathlib import Path

G = []

G.append((1, "No Poverty", "End poverty in all its forms everywhere", [
    ("1.1", "Eradicate extreme poverty for all people everywhere"),
    ("1.2", "Reduce at least by half the proportion of people living in poverty in all its dimensions"),
    ("1.3", "Implement social protection systems and measures for all, including floors"),
    ("1.4", "Ensure equal rights to economic resources, basic services, ownership and finance"),
    ("1.5", "Build the resilience of the poor and reduce their exposure to climate and economic shocks"),
    ("1.a", "Mobilize resources to implement programmes to end poverty in all its dimensions"),
    ("1.b", "Create sound policy frameworks based on pro-poor and gender-sensitive strategies"),
]))

G.append((2, "Zero Hunger", "End hunger, achieve food security and improved nutrition and promote sustainable agriculture", [
    ("2.1", "End hunger and ensure access by all people to safe, nutritious and sufficient food"),
    ("2.2", "End all forms of malnutrition, including stunting and wasting in children"),
    ("2.3", "Double the agricultural productivity and incomes of small-scale food producers"),
    ("2.4", "Ensure sustainable food production systems and resilient agricultural practices"),
    ("2.5", "Maintain the genetic diversity of seeds, cultivated plants and farmed animals"),
    ("2.a", "Increase investment in rural infrastructure, agricultural research and technology"),
    ("2.b", "Correct and prevent trade restrictions and distortions in world agricultural markets"),
    ("2.c", "Adopt measures to ensure the proper functioning of food commodity markets"),
]))

G.append((3, "Good Health and Well-being", "Ensure healthy lives and promote well-being for all at all ages", [
    ("3.1", "Reduce the global maternal mortality ratio to less than 70 per 100,000 live births"),
    ("3.2", "End preventable deaths of newborns and children under 5 years of age"),
    ("3.3", "End the epidemics of AIDS, tuberculosis, malaria and neglected tropical diseases"),
    ("3.4", "Reduce premature mortality from non-communicable diseases and promote mental health"),
    ("3.5", "Strengthen the prevention and treatment of substance abuse"),
    ("3.6", "Halve the number of global deaths and injuries from road traffic accidents"),
    ("3.7", "Ensure universal access to sexual and reproductive health-care services"),
    ("3.8", "Achieve universal health coverage, including access to essential medicines and vaccines"),
    ("3.9", "Reduce deaths and illnesses from hazardous chemicals and pollution"),
    ("3.a", "Strengthen the implementation of the Framework Convention on Tobacco Control"),
    ("3.b", "Support research and development of vaccines and medicines for all"),
    ("3.c", "Increase health financing and the health workforce in developing countries"),
    ("3.d", "Strengthen capacity for early warning, risk reduction and management of health risks"),
]))

G.append((4, "Quality Education", "Ensure inclusive and equitable quality education and promote lifelong learning opportunities for all", [
    ("4.1", "Ensure all girls and boys complete free, equitable and quality primary and secondary education"),
    ("4.2", "Ensure access to quality early childhood development, care and pre-primary education"),
    ("4.3", "Ensure equal access to affordable technical, vocational and tertiary education"),
    ("4.4", "Increase the number of youth and adults with relevant skills for employment"),
    ("4.5", "Eliminate gender disparities in education and ensure equal access for the vulnerable"),
    ("4.6", "Ensure that all youth and most adults achieve literacy and numeracy"),
    ("4.7", "Ensure all learners acquire knowledge and skills needed to promote sustainable development"),
    ("4.a", "Build and upgrade education facilities that are child, disability and gender sensitive"),
    ("4.b", "Expand the number of scholarships available to developing countries"),
    ("4.c", "Increase the supply of qualified teachers in developing countries"),
]))

G.append((5, "Gender Equality", "Achieve gender equality and empower all women and girls", [
    ("5.1", "End all forms of discrimination against all women and girls everywhere"),
    ("5.2", "Eliminate all forms of violence against all women and girls"),
    ("5.3", "Eliminate all harmful practices, such as child marriage and female genital mutilation"),
    ("5.4", "Recognize and value unpaid care and domestic work"),
    ("5.5", "Ensure women's full participation and equal opportunities for leadership"),
    ("5.6", "Ensure universal access to sexual and reproductive health and reproductive rights"),
    ("5.a", "Give women equal rights to economic resources, property and financial services"),
    ("5.b", "Enhance the use of enabling technology to promote the empowerment of women"),
    ("5.c", "Adopt and strengthen policies and legislation for gender equality"),
]))

G.append((6, "Clean Water and Sanitation", "Ensure availability and sustainable management of water and sanitation for all", [
    ("6.1", "Achieve universal and equitable access to safe and affordable drinking water"),
    ("6.2", "Achieve access to adequate and equitable sanitation and hygiene and end open defecation"),
    ("6.3", "Improve water quality by reducing pollution and halving untreated wastewater"),
    ("6.4", "Increase water-use efficiency and ensure sustainable withdrawals of freshwater"),
    ("6.5", "Implement integrated water resources management at all levels"),
    ("6.6", "Protect and restore water-related ecosystems"),
    ("6.a", "Expand international cooperation and capacity-building in water and sanitation"),
    ("6.b", "Support the participation of local communities in water and sanitation management"),
]))

G.append((7, "Affordable and Clean Energy", "Ensure access to affordable, reliable, sustainable and modern energy for all", [
    ("7.1", "Ensure universal access to affordable, reliable and modern energy services"),
    ("7.2", "Increase substantially the share of renewable energy in the global energy mix"),
    ("7.3", "Double the global rate of improvement in energy efficiency"),
    ("7.a", "Enhance international cooperation on clean energy research and technology"),
    ("7.b", "Expand infrastructure for supplying modern and sustainable energy services"),
]))

G.append((8, "Decent Work and Economic Growth", "Promote sustained, inclusive and sustainable economic growth, full and productive employment and decent work for all", [
    ("8.1", "Sustain per capita economic growth in accordance with national circumstances"),
    ("8.2", "Achieve higher levels of economic productivity through diversification and innovation"),
    ("8.3", "Promote policies that support productive activities, decent jobs and entrepreneurship"),
    ("8.4", "Improve resource efficiency in consumption and production and decouple growth from degradation"),
    ("8.5", "Achieve full and productive employment and decent work for all, with equal pay"),
    ("8.6", "Reduce the proportion of youth not in employment, education or training"),
    ("8.7", "Eradicate forced labour, end modern slavery, human trafficking and child labour"),
    ("8.8", "Protect labour rights and promote safe and secure working environments"),
    ("8.9", "Promote sustainable tourism that creates jobs and promotes local culture"),
    ("8.10", "Strengthen the capacity of financial institutions to expand access to financial services"),
    ("8.a", "Increase Aid for Trade support for developing countries"),
    ("8.b", "Develop and operationalize a global strategy for youth employment"),
]))

G.append((9, "Industry, Innovation and Infrastructure", "Build resilient infrastructure, promote inclusive and sustainable industrialization and foster innovation", [
    ("9.1", "Develop quality, reliable, sustainable and resilient infrastructure"),
    ("9.2", "Promote inclusive and sustainable industrialization and raise industry's share of employment"),
    ("9.3", "Increase the access of small-scale enterprises to financial services and markets"),
    ("9.4", "Upgrade infrastructure and retrofit industries to make them sustainable"),
    ("9.5", "Enhance scientific research and upgrade the technological capabilities of industry"),
    ("9.a", "Facilitate sustainable and resilient infrastructure development in developing countries"),
    ("9.b", "Support domestic technology development, research and innovation"),
    ("9.c", "Increase access to information and communications technology and the Internet"),
]))

G.append((10, "Reduced Inequalities", "Reduce inequality within and among countries", [
    ("10.1", "Achieve and sustain income growth of the bottom 40 per cent of the population"),
    ("10.2", "Empower and promote the social, economic and political inclusion of all"),
    ("10.3", "Ensure equal opportunity and reduce inequalities of outcome"),
    ("10.4", "Adopt fiscal, wage and social protection policies to achieve greater equality"),
    ("10.5", "Improve the regulation and monitoring of global financial markets"),
    ("10.6", "Enhance representation of developing countries in global economic institutions"),
    ("10.7", "Facilitate orderly, safe, regular and responsible migration and mobility"),
    ("10.a", "Implement special and differential treatment for developing countries in trade"),
    ("10.b", "Encourage development assistance and investment flows to States where the need is greatest"),
    ("10.c", "Reduce the transaction costs of migrant remittances to less than 3 per cent"),
]))

G.append((11, "Sustainable Cities and Communities", "Make cities and human settlements inclusive, safe, resilient and sustainable", [
    ("11.1", "Ensure access for all to adequate, safe and affordable housing and upgrade slums"),
    ("11.2", "Provide access to safe, affordable, accessible and sustainable transport systems"),
    ("11.3", "Enhance inclusive and sustainable urbanization and participatory planning"),
    ("11.4", "Strengthen efforts to protect and safeguard the world's cultural and natural heritage"),
    ("11.5", "Reduce the number of deaths and economic losses caused by disasters"),
    ("11.6", "Reduce the adverse environmental impact of cities, including air quality and waste"),
    ("11.7", "Provide universal access to safe, inclusive and accessible green and public spaces"),
    ("11.a", "Support positive links between urban, peri-urban and rural areas"),
    ("11.b", "Increase the number of cities adopting integrated disaster risk reduction policies"),
    ("11.c", "Support least developed countries in building sustainable and resilient buildings"),
]))

G.append((12, "Responsible Consumption and Production", "Ensure sustainable consumption and production patterns", [
    ("12.1", "Implement the 10-Year Framework of Programmes on sustainable consumption and production"),
    ("12.2", "Achieve the sustainable management and efficient use of natural resources"),
    ("12.3", "Halve per capita global food waste and reduce food losses along supply chains"),
    ("12.4", "Achieve environmentally sound management of chemicals and all wastes"),
    ("12.5", "Substantially reduce waste generation through prevention, reduction, recycling and reuse"),
    ("12.6", "Encourage companies to adopt sustainable practices and sustainability reporting"),
    ("12.7", "Promote public procurement practices that are sustainable"),
    ("12.8", "Ensure people everywhere have information and awareness for sustainable lifestyles"),
    ("12.a", "Support developing countries' scientific and technological capacity for sustainability"),
    ("12.b", "Develop tools to monitor the impacts of sustainable tourism"),
    ("12.c", "Rationalize inefficient fossil-fuel subsidies that encourage wasteful consumption"),
]))

G.append((13, "Climate Action", "Take urgent action to combat climate change and its impacts", [
    ("13.1", "Strengthen resilience and adaptive capacity to climate-related hazards and disasters"),
    ("13.2", "Integrate climate change measures into national policies, strategies and planning"),
    ("13.3", "Improve education and capacity on climate change mitigation and adaptation"),
    ("13.a", "Implement the commitment to mobilize $100 billion annually for climate finance"),
    ("13.b", "Promote mechanisms for raising capacity for climate planning and management"),
]))

G.append((14, "Life Below Water", "Conserve and sustainably use the oceans, seas and marine resources for sustainable development", [
    ("14.1", "Prevent and significantly reduce marine pollution of all kinds"),
    ("14.2", "Sustainably manage and protect marine and coastal ecosystems"),
    ("14.3", "Minimize and address the impacts of ocean acidification"),
    ("14.4", "End overfishing and illegal, unreported and unregulated fishing"),
    ("14.5", "Conserve at least 10 per cent of coastal and marine areas"),
    ("14.6", "Prohibit fisheries subsidies that contribute to overcapacity and overfishing"),
    ("14.7", "Increase the economic benefits to small island States from sustainable use of marine resources"),
    ("14.a", "Increase scientific knowledge and research capacity for ocean health"),
    ("14.b", "Provide access for small-scale artisanal fishers to marine resources and markets"),
    ("14.c", "Implement international law as reflected in the Law of the Sea"),
]))

G.append((15, "Life on Land", "Protect, restore and promote sustainable use of terrestrial ecosystems, sustainably manage forests, combat desertification, and halt and reverse land degradation and halt biodiversity loss", [
    ("15.1", "Ensure the conservation and restoration of terrestrial and freshwater ecosystems"),
    ("15.2", "Promote sustainable forest management, halt deforestation and restore degraded forests"),
    ("15.3", "Combat desertification and restore degraded land and soil"),
    ("15.4", "Ensure the conservation of mountain ecosystems and their biodiversity"),
    ("15.5", "Reduce the degradation of natural habitats and halt the loss of biodiversity"),
    ("15.6", "Promote fair sharing of the benefits arising from genetic resources"),
    ("15.7", "End poaching and trafficking of protected species of flora and fauna"),
    ("15.8", "Prevent the introduction and reduce the impact of invasive alien species"),
    ("15.9", "Integrate ecosystem and biodiversity values into national and local planning"),
    ("15.a", "Mobilize financial resources to conserve and sustainably use biodiversity and ecosystems"),
    ("15.b", "Mobilize resources to finance sustainable forest management"),
    ("15.c", "Enhance global support for efforts to combat poaching and trafficking of protected species"),
]))

G.append((16, "Peace, Justice and Strong Institutions", "Promote peaceful and inclusive societies for sustainable development, provide access to justice for all and build effective, accountable and inclusive institutions at all levels", [
    ("16.1", "Significantly reduce all forms of violence and related death rates everywhere"),
    ("16.2", "End abuse, exploitation, trafficking and all forms of violence against children"),
    ("16.3", "Promote the rule of law and ensure equal access to justice for all"),
    ("16.4", "Reduce illicit financial and arms flows and combat all forms of organized crime"),
    ("16.5", "Substantially reduce corruption and bribery in all their forms"),
    ("16.6", "Develop effective, accountable and transparent institutions at all levels"),
    ("16.7", "Ensure responsive, inclusive, participatory and representative decision-making"),
    ("16.8", "Broaden the participation of developing countries in global governance institutions"),
    ("16.9", "Provide legal identity for all, including birth registration"),
    ("16.10", "Ensure public access to information and protect fundamental freedoms"),
    ("16.a", "Strengthen institutions to prevent violence and combat terrorism and crime"),
    ("16.b", "Promote and enforce non-discriminatory laws and policies for sustainable development"),
]))

G.append((17, "Partnerships for the Goals", "Strengthen the means of implementation and revitalize the Global Partnership for Sustainable Development", [
    ("17.1", "Strengthen domestic resource mobilization and tax collection capacity"),
    ("17.2", "Developed countries to implement official development assistance commitments"),
    ("17.3", "Mobilize additional financial resources for developing countries"),
    ("17.4", "Assist developing countries in attaining long-term debt sustainability"),
    ("17.5", "Adopt and implement investment promotion regimes for least developed countries"),
    ("17.6", "Enhance cooperation on and access to science, technology and innovation"),
    ("17.7", "Promote the transfer and dissemination of environmentally sound technologies"),
    ("17.8", "Operationalize the technology bank and capacity-building mechanism"),
    ("17.9", "Enhance international support for capacity-building in developing countries"),
    ("17.10", "Promote a universal, rules-based, open, non-discriminatory multilateral trading system"),
    ("17.11", "Significantly increase the exports of developing countries"),
    ("17.12", "Realize duty-free and quota-free market access for least developed countries"),
    ("17.13", "Enhance global macroeconomic stability through policy coordination"),
    ("17.14", "Enhance policy coherence for sustainable development"),
    ("17.15", "Respect each country's policy space and leadership for sustainable development"),
    ("17.16", "Enhance the Global Partnership for Sustainable Development with multi-stakeholder partnerships"),
    ("17.17", "Encourage effective public, public-private and civil society partnerships"),
    ("17.18", "Enhance capacity-building support to increase the availability of disaggregated data"),
    ("17.19", "Develop measurements of progress on sustainable development beyond GDP"),
]))


def main():
    goals = []
    total = 0
    for number, short_name, title, targets in G:
        entries = []
        for code, description in targets:
            assert code.startswith(f"{number}."), code
            entries.append({"code": code, "description": description, "indicators": [f"{code}.1"]})
        total += len(entries)
        goals.append(
            {"goal": number, "short_name": short_name, "title": title, "targets": entries}
        )
    assert len(goals) == 17, len(goals)
    assert total == 169, total
    out = Path(__file__).resolve().parent.parent / "src" / "osdg" / "data" / "sdg_targets.json"
    out.write_text(
        json.dumps({"goals": goals, "total_targets": total}, indent=1), encoding="utf-8"
    )
    print(f"wrote {out} ({total} targets)")


if __name__ == "__main__":
    main()
